class Stats {
    int count = 0;
    int total = 0;
    void add(int value) {
        total = total + value;
        count = count + 1;
    }
    int mean() {
        return total / count;
    }
    void reset() {
        total = 0;
        count = 0;
    }
}

class Helper {
}
