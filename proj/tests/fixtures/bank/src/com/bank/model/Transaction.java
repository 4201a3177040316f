package com.bank.model;

public class Transaction {
    private final double amount;
    private final String kind;

    public Transaction(double amount, String kind) {
        this.amount = amount;
        this.kind = kind;
    }

    public double getAmount() {
        return amount;
    }

    public String describe() {
        return kind + " of " + Math.abs(amount);
    }

    public void applyTo(Account account) {
        if (amount >= 0) {
            account.deposit(amount);
        } else {
            account.withdraw(-amount);
        }
    }
}
