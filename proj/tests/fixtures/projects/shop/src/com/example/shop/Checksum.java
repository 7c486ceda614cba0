package com.example.shop;

import java.security.MessageDigest;
import java.security.NoSuchAlgorithmException;

public class Checksum {
    public byte[] digest(byte[] data) throws NoSuchAlgorithmException {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        return md.digest(data);
    }
}
