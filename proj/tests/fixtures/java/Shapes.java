public class Shapes {
    public static final double PI = 3.14159;
    protected String name;
    int sides, corners;

    public Shapes(String name) {
        this.name = name;
    }

    public double area(double r) {
        return PI * r * r;
    }

    static class Square {
        double side;
    }
}
