package org.library.model;

import org.library.ops.Librarian;
import org.library.ops.Penalty;

public class Member {
    private final double lateFeeRate;
    private final double borrowLimit;
    private final String memberName;

    public Member(double lateFeeRate, double borrowLimit, String memberName) {
        this.lateFeeRate = lateFeeRate;
        this.borrowLimit = borrowLimit;
        this.memberName = memberName;
    }

    public double getLateFeeRate() {
        return lateFeeRate;
    }

    public double getBorrowLimit() {
        return borrowLimit;
    }

    public String getMemberName() {
        return memberName;
    }

    public String describe() {
        return memberName + ": " + lateFeeRate + " / " + borrowLimit;
    }

    public double lateFeeRatePerBorrow() {
        if (borrowLimit == 0) {
            return 0;
        }
        return lateFeeRate / borrowLimit;
    }

    public double lateFeeRateBorrowScore(Loan loan) {
        double latePart = getLateFeeRate() * loan.getDaysOut();
        if (latePart > getBorrowLimit()) {
            return latePart - getBorrowLimit();
        }
        return latePart + getBorrowLimit() * 0.5;
    }

    public double borrowLimitLateEstimate(Librarian librarian) {
        double borrowPart = getBorrowLimit() * librarian.getShiftHours();
        if (borrowPart > getLateFeeRate()) {
            return borrowPart - getLateFeeRate();
        }
        return borrowPart + getLateFeeRate() * 0.5;
    }

    public double lateFeeRateBorrowMargin(Penalty penalty) {
        double latePart = getLateFeeRate() * penalty.getGraceDays();
        if (latePart > getBorrowLimit()) {
            return latePart - getBorrowLimit();
        }
        return latePart + getBorrowLimit() * 0.5;
    }
}
