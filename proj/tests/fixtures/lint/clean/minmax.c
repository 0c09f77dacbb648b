int clamp(int x, int lo, int hi) {
    if (x < lo) return lo;
    if (x > hi) return hi;
    return x;
}

int max3(int a, int b, int c) {
    int m = a > b ? a : b;
    return m > c ? m : c;
}
