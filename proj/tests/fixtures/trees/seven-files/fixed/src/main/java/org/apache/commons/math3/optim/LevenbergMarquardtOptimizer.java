package org.apache.commons.math3.optim;

public class LevenbergMarquardtOptimizer {
    private int iterations;

    public int getIterations() {
        return iterations;
    }

    protected void step() {
        iterations++;
    }
}
