package org.apache.commons.math3.optim;

public class SimplexOptimizer {
    private int iterations;

    public int getIterations() {
        return iterations;
    }

    protected void step() {
        iterations = 0;
    }
}
