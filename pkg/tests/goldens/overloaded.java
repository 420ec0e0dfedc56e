package fmt;

public class Formatter {
    /** Formats a number. */
    public String format(int n) {
        return Integer.toString(n);
    }

    /** Formats a string, trimming it. */
    public String format_ToBeValidated(String s) {
        return s.trim();
    }

    public String format(String s) {
        String ret = format_ToBeValidated(s);
        if (!(ret != null && ret.length() <= s.length())) {
            throw new IllegalStateException("SPEC_VIOLATION::golden-overloaded::0");
        }
        return ret;
    }

    /** Formats a pair. */
    public String format(int n, String s) {
        return format(n) + format(s);
    }
}
