package com.example.shop;

public class Item {
    private final String name;
    private final int count;

    public Item(String name, int count) {
        this.name = name;
        this.count = count;
    }

    public Item(String name) {
        this(name, 1);
    }

    public String getName() {
        return name;
    }

    public int getCount() {
        return count;
    }
}
