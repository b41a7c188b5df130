package demo;

public class Counter {
    private int count;

    public void increment() {
        count = count + 1;
    }

    public int get() {
        return count;
    }
}
