package corpus.jlib;

public class Storage {
    public String label;
}
