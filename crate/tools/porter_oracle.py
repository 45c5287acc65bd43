"""Write reference Porter stems (NLTK, original algorithm) for the stemmer tests."""
import re
import sys
from pathlib import Path

from nltk.stem.porter import PorterStemmer

CLASSIC = """caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing happy sky
relational conditional rational valenci hesitanci digitizer conformabli radicalli
differentli vileli analogousli vietnamization predication operator feudalism
decisiveness hopefulness callousness formaliti sensitiviti sensibiliti triplicate
formative formalize electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment dependent
adoption homologou communism activate angulariti homologous effective bowdlerize probate
rate cease controll roll generalizations oscillators is as a by on up this was yes
grossed rating ratings genre genres movies duplexes condos hockey skating earnings colleges
types years prices medals and or between over under above below not except per across
relationship correlate correlation distribution average total maximum minimum trend
histogram scatterplot visualize""".split()

def main() -> None:
    wn_dir, out = Path(sys.argv[1]), Path(sys.argv[2])
    words = set(CLASSIC)
    for name in ("index.noun", "index.verb"):
        for line in (wn_dir / name).read_text().splitlines():
            if line.startswith(" "):
                continue
            lemma = line.split(" ", 1)[0]
            if re.fullmatch(r"[a-z]+", lemma):
                words.add(lemma)
    stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
    with out.open("w") as f:
        f.write("&[\n")
        for w in sorted(words):
            f.write(f'    ("{w}", "{stemmer.stem(w, to_lowercase=False)}"),\n')
        f.write("]\n")

if __name__ == "__main__":
    main()
