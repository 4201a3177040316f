package org.example.esql.plan;

import java.util.ArrayList;
import java.util.List;

public class Verifier {
    public List<String> verify(LogicalPlan plan) {
        List<String> failures = new ArrayList<>();
        if (plan.query().isBlank()) {
            failures.add("empty query");
        }
        return failures;
    }
}
