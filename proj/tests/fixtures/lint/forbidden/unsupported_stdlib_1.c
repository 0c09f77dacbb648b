void log_value(int v) {
    printf("%d\n", v);
}
