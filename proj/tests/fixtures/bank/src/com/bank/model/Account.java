package com.bank.model;

import java.util.ArrayList;
import java.util.List;

public class Account {
    private final String id;
    private final Customer owner;
    private double balance;
    private final List<Transaction> history = new ArrayList<>();

    public Account(String id, Customer owner) {
        this.id = id;
        this.owner = owner;
    }

    public double getBalance() {
        return balance;
    }

    public String getId() {
        return id;
    }

    public Customer getOwner() {
        return owner;
    }

    public void deposit(double amount) {
        if (amount <= 0) {
            throw new IllegalArgumentException("amount must be positive");
        }
        balance += amount;
        history.add(new Transaction(amount, "deposit"));
    }

    public void withdraw(double amount) {
        if (amount > balance) {
            throw new IllegalStateException("insufficient funds");
        }
        balance -= amount;
        history.add(new Transaction(-amount, "withdraw"));
    }

    /**
     * Interest earned over one period under the given policy.
     */
    public double computeInterest(InterestPolicy policy) {
        double rate = policy.getBaseRate();
        if (policy.qualifiesForBonus(getBalance())) {
            rate += policy.getBonusRate();
        }
        return getBalance() * rate;
    }
}
