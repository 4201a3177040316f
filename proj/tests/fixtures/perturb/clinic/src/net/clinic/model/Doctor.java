package net.clinic.model;

import net.clinic.ops.Insurance;
import net.clinic.ops.Ward;

public class Doctor {
    private final double consultFee;
    private final double yearsPracticed;
    private final String doctorName;

    public Doctor(double consultFee, double yearsPracticed, String doctorName) {
        this.consultFee = consultFee;
        this.yearsPracticed = yearsPracticed;
        this.doctorName = doctorName;
    }

    public double getConsultFee() {
        return consultFee;
    }

    public double getYearsPracticed() {
        return yearsPracticed;
    }

    public String getDoctorName() {
        return doctorName;
    }

    public String describe() {
        return doctorName + ": " + consultFee + " / " + yearsPracticed;
    }

    public double consultFeePerYears() {
        if (yearsPracticed == 0) {
            return 0;
        }
        return consultFee / yearsPracticed;
    }

    public double consultFeeYearsScore(Appointment appointment) {
        double consultPart = getConsultFee() * appointment.getSlotMinutes();
        if (consultPart > getYearsPracticed()) {
            return consultPart - getYearsPracticed();
        }
        return consultPart + getYearsPracticed() * 0.5;
    }

    public double yearsPracticedConsultEstimate(Ward ward) {
        double yearsPart = getYearsPracticed() * ward.getBedCount();
        if (yearsPart > getConsultFee()) {
            return yearsPart - getConsultFee();
        }
        return yearsPart + getConsultFee() * 0.5;
    }

    public double consultFeeYearsMargin(Insurance insurance) {
        double consultPart = getConsultFee() * insurance.getDeductibleAmount();
        if (consultPart > getYearsPracticed()) {
            return consultPart - getYearsPracticed();
        }
        return consultPart + getYearsPracticed() * 0.5;
    }
}
