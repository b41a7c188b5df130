public abstract class Modifiers {
    protected static int counter = 0;
    private final Object lock = new Object();
    public volatile boolean flag;

    public abstract void run();

    protected synchronized void bump() {
        counter++;
    }

    static void log(String msg) {
    }

    private int peek() {
        synchronized (lock) {
            return counter;
        }
    }
}
