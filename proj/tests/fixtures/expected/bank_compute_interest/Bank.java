package com.bank.service;

import com.bank.model.Account;
import com.bank.model.InterestPolicy;
import com.bank.util.TextUtils;
import java.util.ArrayList;
import java.util.List;

public class Bank {
    private final List<Account> accounts = new ArrayList<>();
    private final InterestPolicy policy = new InterestPolicy(0.01, 0.005, 10000);

    public void addAccount(Account account) {
        accounts.add(account);
    }

    public double totalDeposits() {
        double total = 0;
        for (Account a : accounts) {
            total += a.getBalance();
        }
        return total;
    }

    public String monthlyReport() {
        StringBuilder sb = new StringBuilder();
        for (Account a : accounts) {
            sb.append(TextUtils.padRight(a.getId(), 12));
            sb.append(policy.computeInterest(a)).append('\n');
        }
        return sb.toString();
    }
}
