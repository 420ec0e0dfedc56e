package toy;

/**
 * Small integer helpers.
 */
public class MathUtil {
    /** Number of calls made to {@link #abs(int)}. */
    private static int calls;

    /**
     * Returns the absolute value of an int.
     *
     * @param x the value
     * @return {@code x} when it is non-negative, otherwise {@code -x}
     */
    public static int abs(int x) {
        calls++;
        if (x < 0) {
            return -x;
        }
        return x;
    }

    /**
     * Returns the larger of two ints.
     *
     * @param a first value
     * @param b second value
     * @return the larger of {@code a} and {@code b}
     */
    public static int max(int a, int b) {
        return a >= b ? a : b;
    }

    /**
     * Returns how many times {@link #abs(int)} has been called.
     *
     * @return the call count
     */
    public static int calls() {
        return calls;
    }
}
