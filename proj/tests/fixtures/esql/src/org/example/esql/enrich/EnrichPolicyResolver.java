package org.example.esql.enrich;

import java.util.HashMap;
import java.util.Map;

/**
 * Looks up enrich policies by name and checks that their source indices exist.
 */
public class EnrichPolicyResolver {
    private final Map<String, EnrichPolicy> policies = new HashMap<>();

    public void register(String policyName, EnrichPolicy policy) {
        policies.put(policyName, policy);
    }

    public EnrichPolicy lookupPolicy(String policyName) {
        return policies.get(policyName);
    }

    public boolean sourceIndicesExist(EnrichPolicy policy) {
        return !policy.getIndices().isEmpty();
    }
}
