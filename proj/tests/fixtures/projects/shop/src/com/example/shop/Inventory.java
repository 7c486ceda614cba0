package com.example.shop;

import java.util.HashMap;
import java.util.Map;

public class Inventory {
    private final Map<String, Item> items = new HashMap<>();

    static {
        System.setProperty("shop.ready", "true");
    }

    {
        items.clear();
    }

    public void add(Item item) {
        if (item == null) {
            throw new IllegalArgumentException("item");
        }
        items.put(item.getName(), item);
    }

    public int total() {
        int sum = 0;
        for (Item item : items.values()) {
            if (item.getCount() > 0) {
                sum += item.getCount();
            }
        }
        return sum;
    }

    static class Entry {
        String key;

        Entry(String key) {
            this.key = key;
        }
    }
}
