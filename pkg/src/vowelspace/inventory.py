"""Per-language IPA monophthong inventories and shared-vowel classification."""

from importlib import resources
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Set

from .errors import InventoryDataError, UnknownLanguage, VowelNotInPair

# IPA vowel letters; inventory symbols must start with one of these and may
# carry a length mark or nasalization tilde.
_IPA_VOWEL_LETTERS = set("iyɨʉɯuɪʏʊeøɘɵɤoəɛœɜɞʌɔæɐaɶɑɒ")
_IPA_MODIFIERS = {"ː", "̃"}  # long mark, combining tilde

# Sizes the bundled inventory file must match.
BUNDLED_COUNTS = {"DE": 17, "EN": 12, "ES": 5, "FR": 14, "JA": 5, "KO": 7}


def _check_symbol(symbol: str, lang: str) -> None:
    if not symbol or symbol[0] not in _IPA_VOWEL_LETTERS:
        raise InventoryDataError(f"{lang}: {symbol!r} is not an IPA vowel symbol")
    for ch in symbol[1:]:
        if ch not in _IPA_MODIFIERS:
            raise InventoryDataError(f"{lang}: unsupported modifier in {symbol!r}")


class InventoryRegistry:
    """Immutable mapping from language code to its set of vowel symbols."""

    def __init__(self, inventories: Dict[str, Iterable[str]]):
        if not inventories:
            raise InventoryDataError("no languages defined")
        self._inv: Dict[str, FrozenSet[str]] = {}
        for lang, symbols in inventories.items():
            symbols = list(symbols)
            if not symbols:
                raise InventoryDataError(f"{lang}: empty inventory")
            if len(symbols) != len(set(symbols)):
                raise InventoryDataError(f"{lang}: duplicate symbols")
            for s in symbols:
                _check_symbol(s, lang)
            self._inv[lang] = frozenset(symbols)

    def languages(self) -> Set[str]:
        return set(self._inv)

    def vowels(self, language: str) -> FrozenSet[str]:
        try:
            return self._inv[language]
        except KeyError:
            raise UnknownLanguage(f"unknown language code: {language}") from None

    def shared_vowels(self, a: str, b: str) -> FrozenSet[str]:
        """Vowels present in both languages of the pair."""
        return self.vowels(a) & self.vowels(b)

    def is_shared(self, vowel: str, a: str, b: str) -> bool:
        """True iff the vowel belongs to both inventories of the pair."""
        in_a = vowel in self.vowels(a)
        in_b = vowel in self.vowels(b)
        if not in_a and not in_b:
            raise VowelNotInPair(
                f"/{vowel}/ belongs to neither {a} nor {b}")
        return in_a and in_b


def parse_inventories(text: str, source: str = "<string>") -> InventoryRegistry:
    """Parse the line-oriented inventory format: LANG<TAB>symbol symbol ..."""
    inventories: Dict[str, list] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise InventoryDataError(
                f"{source}:{lineno}: expected LANG<TAB>symbols")
        lang, _, rest = line.partition("\t")
        lang = lang.strip()
        if lang in inventories:
            raise InventoryDataError(f"{source}:{lineno}: duplicate language {lang}")
        inventories[lang] = rest.split()
    return InventoryRegistry(inventories)


def load_inventories(path) -> InventoryRegistry:
    return parse_inventories(Path(path).read_text(encoding="utf-8"), str(path))


def default_registry() -> InventoryRegistry:
    """Bundled inventories, validated against the expected per-language sizes."""
    text = resources.files("vowelspace.data").joinpath("inventories.tsv") \
        .read_text(encoding="utf-8")
    registry = parse_inventories(text, "bundled inventories")
    for lang, count in BUNDLED_COUNTS.items():
        actual = len(registry.vowels(lang))
        if actual != count:
            raise InventoryDataError(
                f"bundled inventory for {lang} has {actual} vowels, expected {count}")
    return registry
