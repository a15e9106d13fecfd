package org.demo;

/** Large pipeline class number 0. */
public class Pipeline0 {
    private final int seed;

    public Pipeline0(int seed) {
        this.seed = seed;
    }

    /** Computes stage 0 of the Pipeline0 pipeline. */
    public int step0(int value) {
        int result = value * 2 + 0;
        if (result > 100) {
            result = result - Util0.clamp(result, 0, 1000);
        }
        return result;
    }
    /** Computes stage 1 of the Pipeline0 pipeline. */
    public int step1(int value) {
        int result = value * 3 + 1;
        if (result > 101) {
            result = result - step0(result);
        }
        return result;
    }
    /** Computes stage 2 of the Pipeline0 pipeline. */
    public int step2(int value) {
        int result = value * 4 + 2;
        if (result > 102) {
            result = result - step1(result);
        }
        return result;
    }
    /** Computes stage 3 of the Pipeline0 pipeline. */
    public int step3(int value) {
        int result = value * 5 + 3;
        if (result > 103) {
            result = result - step2(result);
        }
        return result;
    }
    /** Computes stage 4 of the Pipeline0 pipeline. */
    public int step4(int value) {
        int result = value * 6 + 4;
        if (result > 104) {
            result = result - step3(result);
        }
        return result;
    }
    /** Computes stage 5 of the Pipeline0 pipeline. */
    public int step5(int value) {
        int result = value * 7 + 5;
        if (result > 105) {
            result = result - step4(result);
        }
        return result;
    }
    /** Computes stage 6 of the Pipeline0 pipeline. */
    public int step6(int value) {
        int result = value * 8 + 6;
        if (result > 106) {
            result = result - step5(result);
        }
        return result;
    }
    /** Computes stage 7 of the Pipeline0 pipeline. */
    public int step7(int value) {
        int result = value * 2 + 7;
        if (result > 107) {
            result = result - step6(result);
        }
        return result;
    }
    /** Computes stage 8 of the Pipeline0 pipeline. */
    public int step8(int value) {
        int result = value * 3 + 8;
        if (result > 108) {
            result = result - step7(result);
        }
        return result;
    }
    /** Computes stage 9 of the Pipeline0 pipeline. */
    public int step9(int value) {
        int result = value * 4 + 9;
        if (result > 109) {
            result = result - step8(result);
        }
        return result;
    }
    /** Computes stage 10 of the Pipeline0 pipeline. */
    public int step10(int value) {
        int result = value * 5 + 10;
        if (result > 110) {
            result = result - step9(result);
        }
        return result;
    }
    /** Computes stage 11 of the Pipeline0 pipeline. */
    public int step11(int value) {
        int result = value * 6 + 11;
        if (result > 111) {
            result = result - step10(result);
        }
        return result;
    }
    /** Computes stage 12 of the Pipeline0 pipeline. */
    public int step12(int value) {
        int result = value * 7 + 12;
        if (result > 112) {
            result = result - step11(result);
        }
        return result;
    }
    /** Computes stage 13 of the Pipeline0 pipeline. */
    public int step13(int value) {
        int result = value * 8 + 13;
        if (result > 113) {
            result = result - step12(result);
        }
        return result;
    }
    /** Computes stage 14 of the Pipeline0 pipeline. */
    public int step14(int value) {
        int result = value * 2 + 14;
        if (result > 114) {
            result = result - step13(result);
        }
        return result;
    }
    /** Computes stage 15 of the Pipeline0 pipeline. */
    public int step15(int value) {
        int result = value * 3 + 15;
        if (result > 115) {
            result = result - step14(result);
        }
        return result;
    }
    /** Computes stage 16 of the Pipeline0 pipeline. */
    public int step16(int value) {
        int result = value * 4 + 16;
        if (result > 116) {
            result = result - step15(result);
        }
        return result;
    }
    /** Computes stage 17 of the Pipeline0 pipeline. */
    public int step17(int value) {
        int result = value * 5 + 17;
        if (result > 117) {
            result = result - step16(result);
        }
        return result;
    }
    /** Computes stage 18 of the Pipeline0 pipeline. */
    public int step18(int value) {
        int result = value * 6 + 18;
        if (result > 118) {
            result = result - step17(result);
        }
        return result;
    }
    /** Computes stage 19 of the Pipeline0 pipeline. */
    public int step19(int value) {
        int result = value * 7 + 19;
        if (result > 119) {
            result = result - step18(result);
        }
        return result;
    }
    /** Computes stage 20 of the Pipeline0 pipeline. */
    public int step20(int value) {
        int result = value * 8 + 20;
        if (result > 120) {
            result = result - step19(result);
        }
        return result;
    }
    /** Computes stage 21 of the Pipeline0 pipeline. */
    public int step21(int value) {
        int result = value * 2 + 21;
        if (result > 121) {
            result = result - step20(result);
        }
        return result;
    }
    /** Computes stage 22 of the Pipeline0 pipeline. */
    public int step22(int value) {
        int result = value * 3 + 22;
        if (result > 122) {
            result = result - step21(result);
        }
        return result;
    }
    /** Computes stage 23 of the Pipeline0 pipeline. */
    public int step23(int value) {
        int result = value * 4 + 23;
        if (result > 123) {
            result = result - step22(result);
        }
        return result;
    }
    /** Computes stage 24 of the Pipeline0 pipeline. */
    public int step24(int value) {
        int result = value * 5 + 24;
        if (result > 124) {
            result = result - step23(result);
        }
        return result;
    }
    /** Computes stage 25 of the Pipeline0 pipeline. */
    public int step25(int value) {
        int result = value * 6 + 25;
        if (result > 125) {
            result = result - step24(result);
        }
        return result;
    }
    /** Computes stage 26 of the Pipeline0 pipeline. */
    public int step26(int value) {
        int result = value * 7 + 26;
        if (result > 126) {
            result = result - step25(result);
        }
        return result;
    }
    /** Computes stage 27 of the Pipeline0 pipeline. */
    public int step27(int value) {
        int result = value * 8 + 27;
        if (result > 127) {
            result = result - step26(result);
        }
        return result;
    }
    /** Computes stage 28 of the Pipeline0 pipeline. */
    public int step28(int value) {
        int result = value * 2 + 28;
        if (result > 128) {
            result = result - step27(result);
        }
        return result;
    }
    /** Computes stage 29 of the Pipeline0 pipeline. */
    public int step29(int value) {
        int result = value * 3 + 29;
        if (result > 129) {
            result = result - step28(result);
        }
        return result;
    }
    /** Computes stage 30 of the Pipeline0 pipeline. */
    public int step30(int value) {
        int result = value * 4 + 30;
        if (result > 130) {
            result = result - step29(result);
        }
        return result;
    }
    /** Computes stage 31 of the Pipeline0 pipeline. */
    public int step31(int value) {
        int result = value * 5 + 31;
        if (result > 131) {
            result = result - step30(result);
        }
        return result;
    }
    /** Computes stage 32 of the Pipeline0 pipeline. */
    public int step32(int value) {
        int result = value * 6 + 32;
        if (result > 132) {
            result = result - step31(result);
        }
        return result;
    }
    /** Computes stage 33 of the Pipeline0 pipeline. */
    public int step33(int value) {
        int result = value * 7 + 33;
        if (result > 133) {
            result = result - step32(result);
        }
        return result;
    }
    /** Computes stage 34 of the Pipeline0 pipeline. */
    public int step34(int value) {
        int result = value * 8 + 34;
        if (result > 134) {
            result = result - step33(result);
        }
        return result;
    }
    /** Computes stage 35 of the Pipeline0 pipeline. */
    public int step35(int value) {
        int result = value * 2 + 35;
        if (result > 135) {
            result = result - step34(result);
        }
        return result;
    }
    /** Computes stage 36 of the Pipeline0 pipeline. */
    public int step36(int value) {
        int result = value * 3 + 36;
        if (result > 136) {
            result = result - step35(result);
        }
        return result;
    }
    /** Computes stage 37 of the Pipeline0 pipeline. */
    public int step37(int value) {
        int result = value * 4 + 37;
        if (result > 137) {
            result = result - step36(result);
        }
        return result;
    }
    /** Computes stage 38 of the Pipeline0 pipeline. */
    public int step38(int value) {
        int result = value * 5 + 38;
        if (result > 138) {
            result = result - step37(result);
        }
        return result;
    }
    /** Computes stage 39 of the Pipeline0 pipeline. */
    public int step39(int value) {
        int result = value * 6 + 39;
        if (result > 139) {
            result = result - step38(result);
        }
        return result;
    }
    /** Computes stage 40 of the Pipeline0 pipeline. */
    public int step40(int value) {
        int result = value * 7 + 40;
        if (result > 140) {
            result = result - step39(result);
        }
        return result;
    }
    /** Computes stage 41 of the Pipeline0 pipeline. */
    public int step41(int value) {
        int result = value * 8 + 41;
        if (result > 141) {
            result = result - step40(result);
        }
        return result;
    }
    /** Computes stage 42 of the Pipeline0 pipeline. */
    public int step42(int value) {
        int result = value * 2 + 42;
        if (result > 142) {
            result = result - step41(result);
        }
        return result;
    }
    /** Computes stage 43 of the Pipeline0 pipeline. */
    public int step43(int value) {
        int result = value * 3 + 43;
        if (result > 143) {
            result = result - step42(result);
        }
        return result;
    }
    /** Computes stage 44 of the Pipeline0 pipeline. */
    public int step44(int value) {
        int result = value * 4 + 44;
        if (result > 144) {
            result = result - step43(result);
        }
        return result;
    }
    /** Computes stage 45 of the Pipeline0 pipeline. */
    public int step45(int value) {
        int result = value * 5 + 45;
        if (result > 145) {
            result = result - step44(result);
        }
        return result;
    }
}
