package b;

public class Target {
    public static int zero() {
        return 0;
    }
}
