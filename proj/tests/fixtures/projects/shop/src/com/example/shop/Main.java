package com.example.shop;

import java.util.ArrayList;
import java.util.List;

public class Main {
    public static void main(String[] args) {
        Inventory inventory = new Inventory();
        inventory.add(new Item("pen", 3));
        if (args.length > 0) {
            System.out.println(args[0]);
        } else {
            System.out.println("no args");
        }
        List<String> names = new ArrayList<>();
        names.add("x");
        Runnable r = new Runnable() {
            @Override
            public void run() {
                System.out.println("tick");
            }
        };
        r.run();
    }
}
