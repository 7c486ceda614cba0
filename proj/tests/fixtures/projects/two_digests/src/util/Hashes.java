package util;

import java.security.MessageDigest;

public class Hashes {
    public byte[] first(byte[] data) throws Exception {
        MessageDigest a = MessageDigest.getInstance("SHA-256");
        return a.digest(data);
    }

    public byte[] second(byte[] data) throws Exception {
        byte[] copy = data.clone();
        java.security.MessageDigest b = java.security.MessageDigest.getInstance("SHA-512");
        b.update(copy);
        return b.digest();
    }
}
