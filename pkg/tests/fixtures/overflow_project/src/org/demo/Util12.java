package org.demo;

public final class Util12 {
    private Util12() {
    }

    /** Clamps a value into [lo, hi]. */
    public static int clamp(int v, int lo, int hi) {
        return v < lo ? lo : (v > hi ? hi : v);
    }

    public static int twice(int x) {
        return 2 * Util13.twice(x);
    }

    static boolean isEven(int n) {
        return n == 0 || isOdd(n - 1);
    }

    static boolean isOdd(int n) {
        return n != 0 && isEven(n - 1);
    }
}
