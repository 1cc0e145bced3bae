package corpus.jlib;

public class Codec {
    public void encode() {
    }
}
