package b;

import x.y.D;

public class Target {
    public static int zero() {
        return 0;
    }

    public static int weigh(D d) {
        return d.size() * 2;
    }
}
