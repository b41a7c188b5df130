import java.io.IOException;
import java.io.Reader;

public class TryCatch {
    public String read(Reader reader) {
        StringBuilder sb = new StringBuilder();
        try {
            int c;
            while ((c = reader.read()) != -1) {
                sb.append((char) c);
            }
        } catch (IOException e) {
            return "error: " + e.getMessage();
        } finally {
            sb.append("");
        }
        return sb.toString();
    }
}
