class Stats {
    void reset() {
        count = 0;
        total = 0;
    }
    int mean() {
        return total / count;
    }
    void add(int value) {
        count = count + 1;
        total = total + value;
    }
    int total = 0;
    int count = 0;
}
