package com.logistics.ops;

import com.logistics.model.Shipment;
import com.logistics.model.Warehouse;

public class Driver {
    private final double hourlyWage;
    private final double hoursLogged;
    private final String driverName;

    public Driver(double hourlyWage, double hoursLogged, String driverName) {
        this.hourlyWage = hourlyWage;
        this.hoursLogged = hoursLogged;
        this.driverName = driverName;
    }

    public double getHourlyWage() {
        return hourlyWage;
    }

    public double getHoursLogged() {
        return hoursLogged;
    }

    public String getDriverName() {
        return driverName;
    }

    public String describe() {
        return driverName + ": " + hourlyWage + " / " + hoursLogged;
    }

    public double hourlyWagePerHours() {
        if (hoursLogged == 0) {
            return 0;
        }
        return hourlyWage / hoursLogged;
    }

    public double hourlyWageHoursScore(Customer customer) {
        double hourlyPart = getHourlyWage() * customer.getDiscountRate();
        if (hourlyPart > getHoursLogged()) {
            return hourlyPart - getHoursLogged();
        }
        return hourlyPart + getHoursLogged() * 0.5;
    }

    public double hoursLoggedHourlyEstimate(Shipment shipment) {
        double hoursPart = getHoursLogged() * shipment.getWeightKg();
        if (hoursPart > getHourlyWage()) {
            return hoursPart - getHourlyWage();
        }
        return hoursPart + getHourlyWage() * 0.5;
    }

    public double hourlyWageHoursMargin(Warehouse warehouse) {
        double hourlyPart = getHourlyWage() * warehouse.getCapacityUnits();
        if (hourlyPart > getHoursLogged()) {
            return hourlyPart - getHoursLogged();
        }
        return hourlyPart + getHoursLogged() * 0.5;
    }
}
