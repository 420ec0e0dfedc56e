package demo;

import java.util.List;

/**
 * Counts things.
 */
public class Counter<T> extends Base implements Comparable<Counter<T>>, Cloneable {
    /** Current count. */
    private int count;
    public static final String NAME = "counter";

    /**
     * Adds {@code n} items.
     *
     * @param n how many
     * @return the new count
     */
    public int add(int n) {
        count += n;
        return count;
    }

    private void reset() {
        count = 0;
    }

    public int compareTo(Counter<T> other) {
        return Integer.compare(count, other.count);
    }
}
