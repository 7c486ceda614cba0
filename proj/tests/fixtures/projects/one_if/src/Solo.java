public class Solo {
    void work(int n) {
        if (n > 1) {
            n--;
        }
    }
}
