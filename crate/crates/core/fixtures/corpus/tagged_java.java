package corpus.app;

import corpus.jlib.Mode;

@Grade
public class Tagged {
    public Mode mode;

    @Grade
    public Mode pick(Mode fallback) {
        Mode chosen = Mode.FAST;
        return chosen;
    }
}

@interface Grade {
}
