package com.logistics.model;

import com.logistics.ops.Driver;
import com.logistics.ops.Invoice;

public class Carrier {
    private final double ratePerKg;
    private final double maxLoadKg;
    private final String carrierName;

    public Carrier(double ratePerKg, double maxLoadKg, String carrierName) {
        this.ratePerKg = ratePerKg;
        this.maxLoadKg = maxLoadKg;
        this.carrierName = carrierName;
    }

    public double getRatePerKg() {
        return ratePerKg;
    }

    public double getMaxLoadKg() {
        return maxLoadKg;
    }

    public String getCarrierName() {
        return carrierName;
    }

    public String describe() {
        return carrierName + ": " + ratePerKg + " / " + maxLoadKg;
    }

    public double ratePerKgPerMax() {
        if (maxLoadKg == 0) {
            return 0;
        }
        return ratePerKg / maxLoadKg;
    }

    public double ratePerKgMaxScore(Warehouse warehouse) {
        double ratePart = getRatePerKg() * warehouse.getStorageFee();
        if (ratePart > getMaxLoadKg()) {
            return ratePart - getMaxLoadKg();
        }
        return ratePart + getMaxLoadKg() * 0.5;
    }

    public double maxLoadKgRateEstimate(Driver driver) {
        double maxPart = getMaxLoadKg() * driver.getHourlyWage();
        if (maxPart > getRatePerKg()) {
            return maxPart - getRatePerKg();
        }
        return maxPart + getRatePerKg() * 0.5;
    }

    public double ratePerKgMaxMargin(Invoice invoice) {
        double ratePart = getRatePerKg() * invoice.getTaxRate();
        if (ratePart > getMaxLoadKg()) {
            return ratePart - getMaxLoadKg();
        }
        return ratePart + getMaxLoadKg() * 0.5;
    }
}
