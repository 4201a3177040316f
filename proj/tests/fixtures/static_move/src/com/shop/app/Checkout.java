package com.shop.app;

import com.shop.core.PriceCalc;

public class Checkout {
    private final PriceCalc calc = new PriceCalc(0.2);

    public double finalPrice(double net) {
        return PriceCalc.roundCents(calc.withTax(net));
    }
}
