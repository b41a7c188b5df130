import java.util.List;

public class Loops {
    public int sum(List<Integer> items) {
        int total = 0;
        for (int i = 0; i < items.size(); i++) {
            total += items.get(i);
        }
        for (Integer item : items) {
            total = total + item;
        }
        while (total > 10) {
            total /= 2;
        }
        do {
            total--;
        } while (total > 5);
        return total;
    }
}
