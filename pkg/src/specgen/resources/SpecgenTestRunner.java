import java.io.FileWriter;
import java.io.IOException;
import java.io.PrintWriter;
import java.io.StringWriter;
import java.lang.reflect.InvocationTargetException;
import java.lang.reflect.Method;
import java.lang.reflect.Modifier;

/**
 * Minimal test driver for projects without JUnit. Runs every public method
 * whose name starts with "test" on each class named on the command line and
 * writes Defects4J-style all_tests and failing_tests files into the given
 * directory.
 */
public class SpecgenTestRunner {
    public static void main(String[] args) throws Exception {
        String outDir = args[0];
        PrintWriter all = new PrintWriter(new FileWriter(outDir + "/all_tests"));
        PrintWriter failing = new PrintWriter(new FileWriter(outDir + "/failing_tests"));
        int ran = 0;
        int failed = 0;
        for (int i = 1; i < args.length; i++) {
            Class cls = Class.forName(args[i]);
            Method[] methods = cls.getDeclaredMethods();
            java.util.Arrays.sort(methods, new java.util.Comparator() {
                public int compare(Object a, Object b) {
                    return ((Method) a).getName().compareTo(((Method) b).getName());
                }
            });
            for (int j = 0; j < methods.length; j++) {
                Method m = methods[j];
                if (!m.getName().startsWith("test") || !Modifier.isPublic(m.getModifiers())
                        || m.getParameterTypes().length != 0) {
                    continue;
                }
                String id = cls.getName() + "::" + m.getName();
                all.println(m.getName() + "(" + cls.getName() + ")");
                ran++;
                try {
                    Object target = Modifier.isStatic(m.getModifiers()) ? null : cls.newInstance();
                    m.invoke(target, new Object[0]);
                } catch (InvocationTargetException e) {
                    failed++;
                    StringWriter sw = new StringWriter();
                    e.getCause().printStackTrace(new PrintWriter(sw));
                    failing.println("--- " + id);
                    failing.print(sw.toString());
                    System.out.println("FAIL " + id + ": " + e.getCause());
                }
            }
        }
        all.close();
        failing.close();
        System.out.println("Tests run: " + ran);
        System.out.println("Failing tests: " + failed);
    }
}
