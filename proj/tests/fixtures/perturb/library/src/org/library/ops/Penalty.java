package org.library.ops;

import org.library.model.Book;
import org.library.model.Loan;

public class Penalty {
    private final double penaltyAmount;
    private final double graceDays;
    private final String penaltyNote;

    public Penalty(double penaltyAmount, double graceDays, String penaltyNote) {
        this.penaltyAmount = penaltyAmount;
        this.graceDays = graceDays;
        this.penaltyNote = penaltyNote;
    }

    public double getPenaltyAmount() {
        return penaltyAmount;
    }

    public double getGraceDays() {
        return graceDays;
    }

    public String getPenaltyNote() {
        return penaltyNote;
    }

    public String describe() {
        return penaltyNote + ": " + penaltyAmount + " / " + graceDays;
    }

    public double penaltyAmountPerGrace() {
        if (graceDays == 0) {
            return 0;
        }
        return penaltyAmount / graceDays;
    }

    public double penaltyAmountGraceScore(Book book) {
        double penaltyPart = getPenaltyAmount() * book.getPageCount();
        if (penaltyPart > getGraceDays()) {
            return penaltyPart - getGraceDays();
        }
        return penaltyPart + getGraceDays() * 0.5;
    }

    public double graceDaysPenaltyEstimate(Loan loan) {
        double gracePart = getGraceDays() * loan.getDaysOut();
        if (gracePart > getPenaltyAmount()) {
            return gracePart - getPenaltyAmount();
        }
        return gracePart + getPenaltyAmount() * 0.5;
    }

    public double penaltyAmountGraceMargin(Librarian librarian) {
        double penaltyPart = getPenaltyAmount() * librarian.getPayGrade();
        if (penaltyPart > getGraceDays()) {
            return penaltyPart - getGraceDays();
        }
        return penaltyPart + getGraceDays() * 0.5;
    }
}
