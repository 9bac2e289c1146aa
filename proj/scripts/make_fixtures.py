#!/usr/bin/env python3
"""Regenerate the frozen test fixtures under tests/data/.

  o200k_conformance.jsonl  1,000 multilingual strings split by the reference
                           o200k regex (Python `regex` engine)
  fixture_corpus.txt       small multilingual training corpus, one document per line
"""
import json
import random
import sys
from pathlib import Path

import regex

O200K = "|".join([
    r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]*[\p{Ll}\p{Lm}\p{Lo}\p{M}]+(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
    r"""[^\r\n\p{L}\p{N}]?[\p{Lu}\p{Lt}\p{Lm}\p{Lo}\p{M}]+[\p{Ll}\p{Lm}\p{Lo}\p{M}]*(?i:'s|'t|'re|'ve|'m|'ll|'d)?""",
    r"""\p{N}{1,3}""",
    r""" ?[^\s\p{L}\p{N}]+[\r\n/]*""",
    r"""\s*[\r\n]+""",
    r"""\s+(?!\S)""",
    r"""\s+""",
])

SENTENCES = [
    "The quick brown fox jumps over the lazy dog.",
    "I'm sure they'll say it's fine, but we've seen what's happened before.",
    "HELLO WORLD'S END, DON'T PANIC!!",
    "Der schnelle braune Fuchs springt über den faulen Hund.",
    "Größere Änderungen kosten 1.250,99 € pro Monat.",
    "Le cœur a ses raisons que la raison ne connaît point.",
    "¿Dónde está la biblioteca? ¡Aquí mismo!",
    "Съешь же ещё этих мягких французских булок, да выпей чаю.",
    "Україна — це держава у Східній Європі.",
    "Η γρήγορη καφέ αλεπού πηδάει πάνω από τον τεμπέλη σκύλο.",
    "यह एक परीक्षण वाक्य है, जिसमें १२३४ अंक हैं।",
    "এটি একটি বাংলা বাক্য।",
    "هذه جملة عربية للاختبار ١٢٣.",
    "این یک جمله فارسی است.",
    "זהו משפט בעברית.",
    "これは日本語の文章です。カタカナとひらがな、漢字。",
    "我们今天去公园散步，天气很好！",
    "오늘 날씨가 정말 좋네요.",
    "ภาษาไทยไม่มีการเว้นวรรคระหว่างคำ",
    "Tiếng Việt có nhiều dấu thanh điệu.",
    "Kiswahili ni lugha ya Kibantu.",
    "Yorùbá jẹ́ èdè tí ó ní ohùn.",
    "Türkçe'de ünlü uyumu vardır.",
    "Hyvää huomenta, mitä kuuluu?",
    "ქართული ენა უძველესია.",
    "Հայերենը հնդեվրոպական լեզու է։",
    "தமிழ் ஒரு பழமையான மொழி.",
    "తెలుగు భాష చాలా అందమైనది.",
    "ಕನ್ನಡ ಭಾಷೆ",
    "ខ្ញុំស្រឡាញ់ភាសាខ្មែរ",
    "မြန်မာဘာသာ",
    "ሰላም ለዓለም",
    "ǅemal ǈubljana ǋegoš",
    "x² + y³ = z⁴, ½ + ¼ = ¾, Ⅻ o'clock",
    "emoji 🙂🚀 mixed with text 👍🏽 and ZWJ 👨‍👩‍👧",
    "path/to/file.txt\r\nline two\n\n\tindented",
    "a  b   c    \n   \r\n  end   ",
    "'S 'T 'RE 'VE 'M 'LL 'D 'ſ 's't're",
]

POOLS = {
    "lower": "abcdefghijklmnopqrstuvwxyz",
    "upper": "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    "digit": "0123456789",
    "punct": "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~",
    "space": " \t",
    "newline": "\r\n",
    "uspace": "   　  \u0085\u000b\u000c",
    "latin_ext": "àáâäæçèéêëìíîïñòóôöøùúûüýÿßœŒÀÉÖÜĀāĒēŁłŠšŽž",
    "titlecase": "ǅǈǋǲᾈᾉ",
    "modifier": "ʰʲʷˠˤ々ー",
    "marks": "̧́̈̃िेิַ่",
    "cyrillic": "абвгдеёжзийклмнопрстуфхцчшщъыьэюяАБВГДЕЖЗ",
    "greek": "αβγδεζηθικλμνξοπρστυφχψωΑΒΓΔΣΩάέή",
    "devanagari": "अआइईउऊएऐओऔकखगघचछजझटठडढणतथदधनपफबभमयरलवशषसह",
    "arabic": "ابتثجحخدذرزسشصضطظعغفقكلمنهوي",
    "cjk": "的一是不了人我在有他这中大来上国个到说们为子和你地出道也时年",
    "kana": "あいうえおかきくけこアイウエオカキクケコ",
    "hangul": "가나다라마바사아자차카타파하",
    "thai": "กขคงจฉชซญฎฏฐ",
    "numbers_other": "²³¹¼½¾ⅠⅡⅢⅫ١٢٣४५६",
    "symbols": "€£¥©®™°±×÷§¶•…—–“”‘’«»",
    "emoji": "🙂🚀👍🏽🎉❤️",
    "apos": "'",
}


def random_string(rng):
    kind = rng.random()
    if kind < 0.35:
        parts = rng.sample(SENTENCES, rng.randint(1, 3))
        seps = [" ", "\n", "  ", "\r\n", "\t", ""]
        return rng.choice(seps).join(parts)
    if kind < 0.5:
        s = rng.choice(SENTENCES)
        i = rng.randint(0, len(s))
        j = rng.randint(i, len(s))
        return s[i:j]
    names = list(POOLS)
    out = []
    for _ in range(rng.randint(1, 24)):
        pool = POOLS[rng.choice(names)]
        out.append("".join(rng.choice(pool) for _ in range(rng.randint(1, 5))))
    return "".join(out)


def make_conformance(path, count=1000, seed=20260101):
    rng = random.Random(seed)
    pat = regex.compile(O200K)
    with open(path, "w", encoding="utf-8") as f:
        for i in range(count):
            s = random_string(rng)
            chunks = pat.findall(s)
            assert "".join(chunks) == s
            f.write(json.dumps({"text": s, "chunks": chunks}, ensure_ascii=False) + "\n")


def make_corpus(path, seed=7, target_bytes=48_000):
    rng = random.Random(seed)
    lines = []
    size = 0
    base = [s for s in SENTENCES if "\n" not in s and "\r" not in s and "\t" not in s]
    while size < target_bytes:
        doc = " ".join(rng.choice(base) for _ in range(rng.randint(1, 4)))
        lines.append(doc)
        size += len(doc.encode("utf-8")) + 1
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
    make_conformance(root / "o200k_conformance.jsonl")
    make_corpus(root / "fixture_corpus.txt")
