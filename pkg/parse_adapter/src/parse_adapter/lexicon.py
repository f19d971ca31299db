"""Word lists and irregular-form tables for the rule-based parser.

Every word is assigned to exactly one table so lookups are unambiguous;
words that genuinely straddle classes (e.g. "that", "like", verb/noun
zero-derivations such as "vote") are placed in the table covering their
most frequent reading and re-tagged contextually in rules.py.
"""

from __future__ import annotations

DETERMINERS = frozenset("""
    the a an this that these those my our your his her its their
    some any no every each all both another other
""".split())

PRONOUNS = frozenset("""
    i we you he she it they me us him them
    who whom what which anyone everyone someone nobody anybody everybody
    something anything everything nothing
    myself ourselves yourself themselves himself herself itself
""".split())

# Modals never act as a clause's main verb; the have/do/be forms are
# re-tagged VERB when no other verb follows (rules.py).
AUXILIARIES = frozenset("""
    be is are was were been being am
    do does did have has had
    will would can could shall should may might must
""".split())

MODAL_ONLY = frozenset(
    "will would can could shall should may might must".split())

ADPOSITIONS = frozenset("""
    of in on at for with from by about against between into through
    during before after above below under over across behind beyond
    near without within upon toward towards among around like off out
    up down since until per via as
""".split())

COORDINATORS = frozenset("and or but nor yet so".split())

SUBORDINATORS = frozenset(
    "because if when while although though unless whether once".split())

ADVERBS = frozenset("""
    very too also just now never always again here there really still
    even only soon together well back then why how where more most
    less least yesterday today tomorrow instead already
""".split())

# Base (dictionary) forms; inflected forms are resolved against this set
# by the lemmatizer before any suffix heuristic fires.
VERB_BASES = frozenset("""
    act add agree announce appear ask be become begin believe break
    bring build buy call care carry change choose come continue create
    cut decide defend deliver demand deserve destroy die do drive eat
    elect end enjoy expand expect face fail feel fight find fix follow
    fund get give go grow happen have hear help hold honor hope hurt
    improve include increase invest join jumpstart keep know lead learn leave
    let like listen live look lose love make matter mean meet move need
    offer oppose pass pay plan play promise protect prove provide push
    put quit raise reach read rebuild receive reduce reform remember
    repeal replace represent require restore restrain return rise run
    save say
    scare secure see seem sell send serve set share show sign sit speak
    spend stand start stay stifle stop strengthen succeed suffocate
    support take talk tax teach tell thank think threaten try turn
    understand unite urge use vote wait walk want watch weaken win work
    write
""".split())

# Irregular inflected verb forms (past tense and participles) mapped to
# their base; these are also how the tagger recognizes them as verbs.
IRREGULAR_VERBS = {
    "said": "say", "made": "make", "took": "take", "taken": "take",
    "gave": "give", "given": "give", "got": "get", "gotten": "get",
    "went": "go", "gone": "go", "ran": "run", "ate": "eat",
    "eaten": "eat", "came": "come", "knew": "know", "known": "know",
    "saw": "see", "seen": "see", "thought": "think", "told": "tell",
    "felt": "feel", "kept": "keep", "left": "leave", "met": "meet",
    "paid": "pay", "sent": "send", "spent": "spend", "stood": "stand",
    "won": "win", "lost": "lose", "held": "hold", "heard": "hear",
    "led": "lead", "brought": "bring", "bought": "buy", "built": "build",
    "fought": "fight", "found": "find", "chose": "choose",
    "chosen": "choose", "spoke": "speak", "spoken": "speak",
    "wrote": "write", "written": "write", "sat": "sit", "broke": "break",
    "broken": "break", "done": "do", "taught": "teach",
    "understood": "understand", "became": "become", "begun": "begin",
    "began": "begin", "grew": "grow", "grown": "grow", "drove": "drive",
    "driven": "drive", "meant": "mean", "dealt": "deal", "cost": "cost",
    "rose": "rise", "risen": "rise",
}

# Auxiliary forms to lemmas (copula forms collapse to "be").
AUX_LEMMAS = {
    "is": "be", "are": "be", "was": "be", "were": "be", "been": "be",
    "being": "be", "am": "be", "be": "be",
    "does": "do", "did": "do", "do": "do",
    "has": "have", "had": "have", "have": "have",
}

ADJECTIVES = frozenset("""
    able affordable american amazing angry bad beautiful best better
    big blind bold broken civil clean clear common corrupt critical
    dangerous deep different difficult dirty domestic early easy
    economic environmental excited extreme failed fair false federal
    few first fiscal foreign free fresh good grateful great happy hard
    healthy high honored huge illegal important incredible large last
    late legal local long low major many massive middle military minor
    national new next old own political poor private proud public
    radical ready real rich right sad safe same second serious several
    short simple small social special strong tall top true ugly vital
    weak wide working worse worst wrong young
""".split())

IRREGULAR_ADJECTIVES = {
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
}

# Nouns whose final "s" is not a plural marker.
NOUN_NO_STRIP = frozenset("""
    news crisis basis analysis series species politics economics
    ethics congress business class progress access
""".split())

IRREGULAR_NOUNS = {
    "men": "man", "women": "woman", "children": "child",
    "people": "people", "feet": "foot", "teeth": "tooth",
    "lives": "life", "wives": "wife",
}

# Contraction stems produced when "n't" is split off ("can't" -> ca + n't).
CONTRACTION_STEMS = {"ca": "can", "wo": "will", "sha": "shall", "ai": "be"}

# Clitic auxiliaries split off by the tokenizer, with their lemmas.
CLITIC_AUX_LEMMAS = {
    "'s": "be", "'re": "be", "'m": "be", "'ve": "have",
    "'ll": "will", "'d": "would",
}
