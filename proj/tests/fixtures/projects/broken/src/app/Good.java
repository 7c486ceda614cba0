package app;

public class Good {
    public static void main(String[] args) {
        System.out.println("ok");
    }
}
