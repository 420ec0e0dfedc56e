package org.jfree.chart;
import java.util.Arrays;

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
    public LegendItemCollection getLegendItems_ToBeValidated() {
        LegendItemCollection result = new LegendItemCollection();
        result.items.addAll(this.items);
        return result;
    }

    @Override
    public LegendItemCollection getLegendItems() {
        List oldItems = this.items();
        LegendItemCollection ret = getLegendItems_ToBeValidated();
        List retItems = ret.items();
        if (!(Arrays.deepEquals(oldItems.toArray(), retItems.toArray()))) {
            throw new IllegalStateException("SPEC_VIOLATION::golden-legend::0");
        }
        return ret;
    }
}
