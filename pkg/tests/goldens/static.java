package util;

public final class Ranges {
    private Ranges() {
    }

    /** Clamps {@code v} into {@code [lo, hi]}. */
    public static int clamp_ToBeValidated(int v, int lo, int hi) {
        return Math.max(lo, Math.min(hi, v));
    }

    public static int clamp(int v, int lo, int hi) {
        int ret = clamp_ToBeValidated(v, lo, hi);
        if (!(ret >= lo && ret <= hi)) {
            throw new IllegalStateException("SPEC_VIOLATION::golden-static::0");
        }
        return ret;
    }
}
