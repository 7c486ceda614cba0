package app;

public class Bad {
    public void run() {
        int x = ;
    }
}
