package org.library.ops;

import org.library.model.Member;
import org.library.model.Shelf;

public class Branch {
    private final double floorArea;
    private final double visitorCount;
    private final String branchCity;

    public Branch(double floorArea, double visitorCount, String branchCity) {
        this.floorArea = floorArea;
        this.visitorCount = visitorCount;
        this.branchCity = branchCity;
    }

    public double getFloorArea() {
        return floorArea;
    }

    public double getVisitorCount() {
        return visitorCount;
    }

    public String getBranchCity() {
        return branchCity;
    }

    public String describe() {
        return branchCity + ": " + floorArea + " / " + visitorCount;
    }

    public double floorAreaPerVisitor() {
        if (visitorCount == 0) {
            return 0;
        }
        return floorArea / visitorCount;
    }

    public double floorAreaVisitorScore(Penalty penalty) {
        double floorPart = getFloorArea() * penalty.getPenaltyAmount();
        if (floorPart > getVisitorCount()) {
            return floorPart - getVisitorCount();
        }
        return floorPart + getVisitorCount() * 0.5;
    }

    public double visitorCountFloorEstimate(Member member) {
        double visitorPart = getVisitorCount() * member.getLateFeeRate();
        if (visitorPart > getFloorArea()) {
            return visitorPart - getFloorArea();
        }
        return visitorPart + getFloorArea() * 0.5;
    }

    public double floorAreaVisitorMargin(Shelf shelf) {
        double floorPart = getFloorArea() * shelf.getShelfLoad();
        if (floorPart > getVisitorCount()) {
            return floorPart - getVisitorCount();
        }
        return floorPart + getVisitorCount() * 0.5;
    }
}
