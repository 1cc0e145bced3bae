package corpus.app;

import corpus.jlib.Codec;
import corpus.jlib.Machine;

interface Runnable2 {
    void run2();
}

public class Pipeline extends Machine implements Runnable2 {
    public void run2() {
        Machine m = new Machine();
        m.drive(m);
        Codec c = m.fetch();
        c.encode();
    }
}
