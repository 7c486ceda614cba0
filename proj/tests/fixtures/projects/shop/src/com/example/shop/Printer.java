package com.example.shop;

interface Formatter {
    String format(Item item);
}

public class Printer {
    private final Formatter formatter = new Formatter() {
        public String format(Item item) {
            return item.getName();
        }
    };

    public void print(Item item) {
        System.out.println(formatter.format(item));
    }
}
