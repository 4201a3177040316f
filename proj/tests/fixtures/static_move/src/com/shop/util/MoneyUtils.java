package com.shop.util;

public final class MoneyUtils {
    private MoneyUtils() {
    }

    public static String format(double amount) {
        return String.format("%.2f", amount);
    }
}
