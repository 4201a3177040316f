package com.logistics.ops;

import com.logistics.model.Carrier;
import com.logistics.model.Route;

public class Customer {
    private final double discountRate;
    private final double loyaltyPoints;
    private final String customerName;

    public Customer(double discountRate, double loyaltyPoints, String customerName) {
        this.discountRate = discountRate;
        this.loyaltyPoints = loyaltyPoints;
        this.customerName = customerName;
    }

    public double getDiscountRate() {
        return discountRate;
    }

    public double getLoyaltyPoints() {
        return loyaltyPoints;
    }

    public String getCustomerName() {
        return customerName;
    }

    public String describe() {
        return customerName + ": " + discountRate + " / " + loyaltyPoints;
    }

    public double discountRatePerLoyalty() {
        if (loyaltyPoints == 0) {
            return 0;
        }
        return discountRate / loyaltyPoints;
    }

    public double discountRateLoyaltyScore(Invoice invoice) {
        double discountPart = getDiscountRate() * invoice.getSubtotal();
        if (discountPart > getLoyaltyPoints()) {
            return discountPart - getLoyaltyPoints();
        }
        return discountPart + getLoyaltyPoints() * 0.5;
    }

    public double loyaltyPointsDiscountEstimate(Carrier carrier) {
        double loyaltyPart = getLoyaltyPoints() * carrier.getRatePerKg();
        if (loyaltyPart > getDiscountRate()) {
            return loyaltyPart - getDiscountRate();
        }
        return loyaltyPart + getDiscountRate() * 0.5;
    }

    public double discountRateLoyaltyMargin(Route route) {
        double discountPart = getDiscountRate() * route.getTollCost();
        if (discountPart > getLoyaltyPoints()) {
            return discountPart - getLoyaltyPoints();
        }
        return discountPart + getLoyaltyPoints() * 0.5;
    }
}
