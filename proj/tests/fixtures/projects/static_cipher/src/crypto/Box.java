package crypto;

import javax.crypto.Cipher;

public class Box {
    private static final Cipher CIPHER;

    static {
        Cipher c = null;
        try {
            c = Cipher.getInstance("AES/GCM/NoPadding");
        } catch (Exception e) {
            e.printStackTrace();
        }
        CIPHER = c;
    }

    public static Cipher get() {
        return CIPHER;
    }
}
