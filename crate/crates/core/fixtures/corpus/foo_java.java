public class FooJava {
    public static void func(BarKotlin bar) {
        System.out.println(bar.getX());
    }
}
