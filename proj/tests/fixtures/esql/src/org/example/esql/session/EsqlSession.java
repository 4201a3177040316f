package org.example.esql.session;

import java.util.List;
import org.example.esql.enrich.EnrichPolicy;
import org.example.esql.enrich.EnrichPolicyResolution;
import org.example.esql.enrich.EnrichPolicyResolver;
import org.example.esql.plan.LogicalPlan;
import org.example.esql.plan.PlanOptimizer;
import org.example.esql.plan.Verifier;

/**
 * One query session: parses, analyzes, optimizes and runs a query plan.
 */
public class EsqlSession {
    private final String sessionId;
    private final EnrichPolicyResolver enrichPolicyResolver;
    private final PlanOptimizer planOptimizer;
    private final Verifier verifier;
    private int queryCount;

    public EsqlSession(String sessionId, EnrichPolicyResolver enrichPolicyResolver, PlanOptimizer planOptimizer,
            Verifier verifier) {
        this.sessionId = sessionId;
        this.enrichPolicyResolver = enrichPolicyResolver;
        this.planOptimizer = planOptimizer;
        this.verifier = verifier;
    }

    public String sessionId() {
        return sessionId;
    }

    public String execute(String query) {
        queryCount++;
        LogicalPlan plan = optimizedPlan(analyzedPlan(parse(query)));
        return sessionId + "#" + queryCount + ": " + plan.query();
    }

    public LogicalPlan parse(String query) {
        return new LogicalPlan(query.trim(), false, false);
    }

    public LogicalPlan analyzedPlan(LogicalPlan parsed) {
        List<String> failures = verifier.verify(parsed);
        if (!failures.isEmpty()) {
            throw new IllegalArgumentException(sessionId + " query failed verification: " + failures);
        }
        return parsed.withAnalyzed();
    }

    public LogicalPlan optimizedPlan(LogicalPlan analyzed) {
        return planOptimizer.optimize(analyzed);
    }

    public String describeSession() {
        return "session " + sessionId + " ran " + queryCount + " query plans";
    }

    public EnrichPolicyResolution resolvePolicy(String policyName) {
        EnrichPolicy policy = enrichPolicyResolver.lookupPolicy(policyName);
        if (policy == null) {
            return EnrichPolicyResolution.unresolved(policyName, "enrich policy [" + policyName + "] not found");
        }
        if (!enrichPolicyResolver.sourceIndicesExist(policy)) {
            return EnrichPolicyResolution.unresolved(policyName, "enrich policy has no source indices");
        }
        return EnrichPolicyResolution.resolved(policyName, policy);
    }
}
