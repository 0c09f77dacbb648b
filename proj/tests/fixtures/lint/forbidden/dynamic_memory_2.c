void grow_table(int count) {
    int *table = (int *)calloc(count, sizeof(int));
    table[0] = count;
    free(table);
}
