package corpus.jlib;

public enum Mode {
    FAST,
    SLOW
}
