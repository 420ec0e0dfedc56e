package fmt;

public class Formatter {
    /** Formats a number. */
    public String format(int n) {
        return Integer.toString(n);
    }

    /** Formats a string, trimming it. */
    public String format(String s) {
        return s.trim();
    }

    /** Formats a pair. */
    public String format(int n, String s) {
        return format(n) + format(s);
    }
}
