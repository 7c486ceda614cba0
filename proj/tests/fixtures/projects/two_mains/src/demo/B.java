package demo;

public class B {
    public static void main(String... args) {
        System.out.println("B");
    }

    void main(int x) {
    }
}
