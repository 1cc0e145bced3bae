package corpus.app;

import corpus.Widget;

public class Report {
    public Widget subject;

    public Widget rebuild() {
        Widget fresh = new Widget(3);
        int size = fresh.getSize();
        return fresh;
    }
}
