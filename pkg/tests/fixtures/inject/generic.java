package alg;

import java.util.List;

public class Extremes {
    /**
     * Largest element of a non-empty list.
     */
    public static <T extends Comparable<T>> T maxOf(List<T> xs) {
        T best = xs.get(0);
        for (T x : xs) {
            if (x.compareTo(best) > 0) {
                best = x;
            }
        }
        return best;
    }
}
