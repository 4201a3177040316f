package com.logistics.model;

import com.logistics.ops.Customer;

public class Shipment {
    private final double weightKg;
    private final double declaredValue;
    private final String trackingCode;

    public Shipment(double weightKg, double declaredValue, String trackingCode) {
        this.weightKg = weightKg;
        this.declaredValue = declaredValue;
        this.trackingCode = trackingCode;
    }

    public double getWeightKg() {
        return weightKg;
    }

    public double getDeclaredValue() {
        return declaredValue;
    }

    public String getTrackingCode() {
        return trackingCode;
    }

    public String describe() {
        return trackingCode + ": " + weightKg + " / " + declaredValue;
    }

    public double weightKgPerDeclared() {
        if (declaredValue == 0) {
            return 0;
        }
        return weightKg / declaredValue;
    }

    public double weightKgDeclaredScore(Carrier carrier) {
        double weightPart = getWeightKg() * carrier.getRatePerKg();
        if (weightPart > getDeclaredValue()) {
            return weightPart - getDeclaredValue();
        }
        return weightPart + getDeclaredValue() * 0.5;
    }

    public double declaredValueWeightEstimate(Route route) {
        double declaredPart = getDeclaredValue() * route.getDistanceKm();
        if (declaredPart > getWeightKg()) {
            return declaredPart - getWeightKg();
        }
        return declaredPart + getWeightKg() * 0.5;
    }

    public double weightKgDeclaredMargin(Customer customer) {
        double weightPart = getWeightKg() * customer.getLoyaltyPoints();
        if (weightPart > getDeclaredValue()) {
            return weightPart - getDeclaredValue();
        }
        return weightPart + getDeclaredValue() * 0.5;
    }
}
