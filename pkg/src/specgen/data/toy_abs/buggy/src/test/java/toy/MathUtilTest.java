package toy;

public class MathUtilTest {
    private static void check(boolean ok, String message) {
        if (!ok) {
            throw new AssertionError(message);
        }
    }

    public static void testAbsPositive() {
        check(MathUtil.abs(3) == 3, "abs(3) should be 3");
    }

    public static void testAbsZero() {
        check(MathUtil.abs(0) == 0, "abs(0) should be 0");
    }

    public static void testAbsNegative() {
        int got = MathUtil.abs(-5);
        check(got == 5, "abs(-5) should be 5 but was " + got);
    }

    public static void testMax() {
        check(MathUtil.max(2, 7) == 7, "max(2, 7) should be 7");
        check(MathUtil.max(7, 2) == 7, "max(7, 2) should be 7");
    }
}
