package org.jfree.chart;

import java.io.Serializable;
import java.util.ArrayList;
import java.util.List;

/**
 * A collection of legend items.
 */
public class LegendItemCollection implements Cloneable, Serializable {
    private List items;

    public LegendItemCollection() {
        this.items = new ArrayList();
    }

    public List items() {
        return this.items;
    }

    /**
     * Returns a collection of legend items for the plot.
     *
     * @return The legend items (never {@code null}).
     */
    @Override
    public LegendItemCollection getLegendItems() {
        LegendItemCollection result = new LegendItemCollection();
        result.items.addAll(this.items);
        return result;
    }
}
