#!/usr/bin/env python3
"""Regenerate the synthetic datasets under fixtures/.

Output is deterministic for a given seed; rerunning overwrites the files.
"""
import csv
import math
import os
import random

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def write(name, header, rows):
    with open(os.path.join(OUT, name), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def lognormal(rng, lo, hi):
    v = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return int(round(v, -3))


def movies(rng):
    adjs = ["Crimson", "Silent", "Hidden", "Broken", "Frozen", "Distant", "Electric",
            "Velvet", "Hollow", "Midnight", "Scarlet", "Wandering", "Iron", "Paper",
            "Glass", "Savage", "Quiet", "Northern", "Lucky", "Emerald"]
    nouns = ["Harbor", "Orbit", "Kingdom", "Garden", "River", "Promise", "Empire",
             "Signal", "Horizon", "Mirror", "Lantern", "Voyage", "Echo", "Summit",
             "Frontier", "Canyon", "Island", "Shadow", "Compass", "Citadel"]
    genres = ["Action", "Adventure", "Comedy", "Drama", "Horror", "Thriller", "Musical",
              "Documentary", "Western", "Romantic Comedy", "Black Comedy"]
    creative = ["Contemporary Fiction", "Science Fiction", "Historical Fiction",
                "Kids Fiction", "Fantasy", "Super Hero", "Factual", "Dramatization"]
    ratings = ["G", "PG", "PG-13", "R"]
    rows = []
    seen = set()
    for i in range(640):
        while True:
            t = f"{rng.choice(adjs)} {rng.choice(nouns)}"
            if rng.random() < 0.3:
                t = "The " + t
            if t not in seen:
                break
            t += " " + ["II", "III", "IV"][rng.randrange(3)]
            if t not in seen:
                break
        seen.add(t)
        budget = lognormal(rng, 1_000_000, 300_000_000)
        gross = int(budget * rng.uniform(0.2, 6.0) // 1000 * 1000)
        rt = "" if rng.random() < 0.05 else str(rng.randint(5, 99))
        imdb = f"{rng.uniform(2.0, 9.2):.1f}"
        rows.append([t, gross, budget, rng.randint(1990, 2019), rng.randint(82, 178),
                     rng.choice(ratings), rng.choice(genres), rng.choice(creative), rt, imdb])
    write("movies.csv", ["Title", "Worldwide Gross", "Production Budget", "Release Year",
                         "Running Time", "Content Rating", "Genre", "Creative Type",
                         "Rotten Tomatoes Rating", "IMDB Rating"], rows)


def cars(rng):
    makes = {"ford": ["torino", "galaxie", "pinto", "maverick", "mustang"],
             "chevrolet": ["chevelle", "impala", "nova", "vega", "monte carlo"],
             "toyota": ["corolla", "corona", "celica"],
             "datsun": ["510", "b210", "280z"],
             "volkswagen": ["rabbit", "dasher", "beetle"],
             "peugeot": ["504", "604"],
             "plymouth": ["fury", "duster", "valiant"]}
    origin = {"ford": "USA", "chevrolet": "USA", "plymouth": "USA", "toyota": "Japan",
              "datsun": "Japan", "volkswagen": "Europe", "peugeot": "Europe"}
    rows = []
    for i in range(406):
        make = rng.choice(sorted(makes))
        name = f"{make} {rng.choice(makes[make])}"
        cyl = rng.choice([4, 4, 4, 6, 6, 8]) if origin[make] == "USA" else rng.choice([4, 4, 6])
        disp = cyl * rng.randint(18, 45)
        hp = "" if rng.random() < 0.02 else str(int(disp * rng.uniform(0.35, 0.6)))
        weight = int(1500 + disp * rng.uniform(5.5, 8.0))
        mpg = round(max(9.0, 46 - weight / 120 + rng.uniform(-3, 3)), 1)
        acc = round(rng.uniform(8.0, 24.8), 1)
        rows.append([name, mpg, cyl, disp, hp, weight, acc, rng.randint(70, 82), origin[make]])
    write("cars.csv", ["Name", "MPG", "Cylinders", "Displacement", "Horsepower", "Weight",
                       "Acceleration", "Year", "Origin"], rows)


def housing(rng):
    types = {"Condo": 0.8, "Duplex": 0.9, "Single Family": 1.3, "Townhouse": 1.0,
             "Apartment": 0.6}
    cities = ["Springfield", "Riverside", "Franklin", "Greenville", "Fairview"]
    rows = []
    for i in range(520):
        ht = rng.choice(sorted(types))
        year = rng.randint(2005, 2019)
        beds = rng.randint(1, 5)
        sqft = beds * rng.randint(350, 700)
        price = int(types[ht] * (150_000 + 9_000 * (year - 2005)) * rng.uniform(0.7, 1.4)
                    // 100 * 100)
        rows.append([f"${price:,}", ht, year, rng.choice(cities), beds, sqft])
    write("housing.csv", ["Price", "House Type", "Year", "City", "Bedrooms", "Square Feet"], rows)


def olympics(rng):
    games = [(1994, "Lillehammer"), (1998, "Nagano"), (2002, "Salt Lake City"),
             (2006, "Turin"), (2010, "Vancouver"), (2014, "Sochi"), (2018, "Pyeongchang"),
             (2000, "Sydney"), (2004, "Athens"), (2008, "Beijing"), (2012, "London"),
             (2016, "Rio de Janeiro")]
    sports = ["Ice Hockey", "Hockey", "Figure Skating", "Speed Skating", "Swimming",
              "Athletics", "Rowing", "Cycling", "Alpine Skiing", "Biathlon"]
    countries = ["United States", "Canada", "Germany", "Norway", "Netherlands", "China",
                 "Japan", "Russia", "Sweden", "Finland", "India", "Australia",
                 "Great Britain", "France", "Italy", "South Korea"]
    rows = []
    for year, city in games:
        for sport in sports:
            for country in rng.sample(countries, 6):
                g, s, b = rng.randint(0, 4), rng.randint(0, 4), rng.randint(0, 4)
                rows.append([year, city, sport, country, g, s, b, g + s + b])
    write("olympics.csv", ["Year", "City", "Sport", "Country", "Gold Medals", "Silver Medals",
                           "Bronze Medals", "Total Medals"], rows)


def colleges(rng):
    places = ["Ashford", "Bellmont", "Carver", "Dunmore", "Easton", "Fulton", "Glenwood",
              "Harlow", "Irvington", "Jasper", "Kingsley", "Lakeview", "Marlow", "Northfield",
              "Oakridge", "Pemberton", "Quincy", "Redmond", "Sheldon", "Thornton"]
    forms = ["University of {}", "{} University", "{} Institute of Technology",
             "{} State University"]
    regions = ["Northeast", "Southeast", "Midwest", "Southwest", "Far West", "Plains",
               "Rocky Mountains", "Great Lakes"]
    ctypes = ["Public", "Private Nonprofit", "Private For-Profit"]
    rows = []
    for p in places:
        for f in forms:
            ct = rng.choice(ctypes)
            cost = rng.randint(12_000, 68_000)
            debt = rng.randint(8_000, 32_000)
            earn = rng.randint(28_000, 95_000)
            rows.append([f.format(p), rng.choice(regions), ct,
                         f"{rng.uniform(0.05, 0.95):.2f}", cost, debt, earn,
                         rng.randint(900, 1550), rng.randint(800, 45_000)])
    write("colleges.csv", ["Name", "Region", "College Type", "Admission Rate", "Average Cost",
                           "Median Debt", "Median Earnings", "SAT Score",
                           "Undergrad Population"], rows)


def main():
    os.makedirs(OUT, exist_ok=True)
    for i, fn in enumerate([movies, cars, housing, olympics, colleges]):
        fn(random.Random(1000 + i))


if __name__ == "__main__":
    main()
