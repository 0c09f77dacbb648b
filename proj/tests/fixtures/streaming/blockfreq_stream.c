typedef int bool;

double cephes_igamc(double a, double x);

void BlockFrequency(int M, int n, bool bit) {
    static int i = 0, j = 0, blockSum = 0;
    static double sum = 0.0;
    double pi, v, chi2;
    double p_value;
    if (j == 0) {
        i++;
        blockSum = 0;
    }
    blockSum += bit;
    j++;
    if (j == M) {
        pi = (double)blockSum / (double)M;
        v = pi - 0.5;
        sum += v * v;
        j = 0;
    }
    if (i == (n / M)) {
        chi2 = 4.0 * M * sum;
        p_value = cephes_igamc(n / 2.0, chi2 / 2.0);
    }
}
