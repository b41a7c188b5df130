package app.model;

public class Outer {
    private int x;

    class Inner {
        int y;

        int sum() {
            return x + y;
        }
    }

    public void local() {
        class Helper {
            void help() {
            }
        }
        new Helper().help();
    }
}
