package net.clinic.model;

import net.clinic.ops.Nurse;

public class Patient {
    private final double bodyMass;
    private final double ageYears;
    private final String patientName;

    public Patient(double bodyMass, double ageYears, String patientName) {
        this.bodyMass = bodyMass;
        this.ageYears = ageYears;
        this.patientName = patientName;
    }

    public double getBodyMass() {
        return bodyMass;
    }

    public double getAgeYears() {
        return ageYears;
    }

    public String getPatientName() {
        return patientName;
    }

    public String describe() {
        return patientName + ": " + bodyMass + " / " + ageYears;
    }

    public double bodyMassPerAge() {
        if (ageYears == 0) {
            return 0;
        }
        return bodyMass / ageYears;
    }

    public double bodyMassAgeScore(Doctor doctor) {
        double bodyPart = getBodyMass() * doctor.getConsultFee();
        if (bodyPart > getAgeYears()) {
            return bodyPart - getAgeYears();
        }
        return bodyPart + getAgeYears() * 0.5;
    }

    public double ageYearsBodyEstimate(Prescription prescription) {
        double agePart = getAgeYears() * prescription.getDoseMg();
        if (agePart > getBodyMass()) {
            return agePart - getBodyMass();
        }
        return agePart + getBodyMass() * 0.5;
    }

    public double bodyMassAgeMargin(Nurse nurse) {
        double bodyPart = getBodyMass() * nurse.getOvertimeHours();
        if (bodyPart > getAgeYears()) {
            return bodyPart - getAgeYears();
        }
        return bodyPart + getAgeYears() * 0.5;
    }
}
