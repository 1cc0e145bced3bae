package corpus.jlib;

public class Machine {
    public Codec unit;

    public Codec fetch() {
        return unit;
    }

    public void drive(Machine other) {
        Object raw = other.fetch();
        Codec codec = (Codec) raw;
        codec.encode();
    }

    public void reset() {
        unit = null;
    }
}
