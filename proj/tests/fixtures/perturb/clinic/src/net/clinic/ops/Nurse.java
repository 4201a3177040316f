package net.clinic.ops;

import net.clinic.model.Doctor;
import net.clinic.model.Prescription;

public class Nurse {
    private final double shiftLength;
    private final double overtimeHours;
    private final String nurseName;

    public Nurse(double shiftLength, double overtimeHours, String nurseName) {
        this.shiftLength = shiftLength;
        this.overtimeHours = overtimeHours;
        this.nurseName = nurseName;
    }

    public double getShiftLength() {
        return shiftLength;
    }

    public double getOvertimeHours() {
        return overtimeHours;
    }

    public String getNurseName() {
        return nurseName;
    }

    public String describe() {
        return nurseName + ": " + shiftLength + " / " + overtimeHours;
    }

    public double shiftLengthPerOvertime() {
        if (overtimeHours == 0) {
            return 0;
        }
        return shiftLength / overtimeHours;
    }

    public double shiftLengthOvertimeScore(Insurance insurance) {
        double shiftPart = getShiftLength() * insurance.getCoverageRatio();
        if (shiftPart > getOvertimeHours()) {
            return shiftPart - getOvertimeHours();
        }
        return shiftPart + getOvertimeHours() * 0.5;
    }

    public double overtimeHoursShiftEstimate(Doctor doctor) {
        double overtimePart = getOvertimeHours() * doctor.getConsultFee();
        if (overtimePart > getShiftLength()) {
            return overtimePart - getShiftLength();
        }
        return overtimePart + getShiftLength() * 0.5;
    }

    public double shiftLengthOvertimeMargin(Prescription prescription) {
        double shiftPart = getShiftLength() * prescription.getRefillCount();
        if (shiftPart > getOvertimeHours()) {
            return shiftPart - getOvertimeHours();
        }
        return shiftPart + getOvertimeHours() * 0.5;
    }
}
