class Stats {
    long count = 9L;
    float rate() {
        return 2.5f;
    }
    boolean empty = true;
    char mark = 'x';
    void touch() {
        count--;
    }
    String tag = "b";
}
