package com.shop.app;

import com.shop.core.PriceCalc;
import com.shop.util.MoneyUtils;

public class Invoice {
    private final double[] lines;

    public Invoice(double[] lines) {
        this.lines = lines;
    }

    public String render() {
        double sum = 0;
        for (double line : lines) {
            sum += line;
        }
        return MoneyUtils.format(PriceCalc.roundCents(sum));
    }
}
