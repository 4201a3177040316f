package a;

import x.y.D;

public class Host {
    private int count;

    public void bump() {
        count++;
    }
}
