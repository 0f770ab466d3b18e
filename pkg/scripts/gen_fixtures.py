#!/usr/bin/env python3
"""Regenerate the committed test fixtures and golden files.

Everything here is deterministic: corpora come from fixed seeds and
hand-written templates, and the golden files are literal expected values
that the current pipeline must reproduce before anything is written.
Run from the repository root:

    python3 scripts/gen_fixtures.py
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

from oracleforge import (
    BuiltinHeuristic,
    RankerConfig,
    infer_oracle,
    parse_test_method,
    render_oracle_test,
    render_test_method,
    strip_implementation,
    strip_oracles,
)
from oracleforge.candidates import GlobalConstantTable
from oracleforge.evalharness import k_ablation
from oracleforge.oracles import label_exception
from oracleforge.testlang import Literal, OpaqueStmt

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = ROOT / "tests" / "golden"


def record(class_name: str, focal: str, doc: str, test: str) -> dict:
    return {
        "focal_method": focal,
        "docstring": doc,
        "class_name": class_name,
        "test": test,
    }


# --- grammar corpus: in-grammar tests spanning every supported oracle shape ---

GRAMMAR_RECORDS = [
    # normal-invocation shape: prefix drives the unit, assertTrue checks it
    record(
        "Stack", "public int pop() { return this.items.remove(this.size - 1); }",
        "Removes and returns the top element.",
        "public void testPop() { Stack s = new Stack(); s.push(5); int top = s.pop(); assertTrue(s.isEmpty()); }",
    ),
    # exceptional-invocation shape: declaration outside try, bare fail, empty catch
    record(
        "Stack", "public int pop() { return this.items.remove(this.size - 1); }",
        "Removes and returns the top element.",
        "public void testPopEmpty() { Stack s = new Stack(); try { s.pop(); Assert.fail(); } catch (Exception e) { } }",
    ),
    # expected-exception shape with a verifyException call naming the type
    record(
        "NumberUtils", "public static Number createNumber(String str) { return null; }",
        "Turns a string value into a java.lang.Number. @throws NumberFormatException if the value cannot be converted",
        'public void testCreateNumber() { try { NumberUtils.createNumber("0XT"); fail("expecting exception"); } catch (Exception e) { verifyException(e, NumberFormatException); } }',
    ),
    # assertEquals with literal expected sides of each literal type
    record(
        "Ledger", "public int balance() { return this.total; }",
        "Current balance.",
        "public void testOpeningBalance() { Ledger l = new Ledger(); int b = l.balance(); assertEquals(0, b); }",
    ),
    record(
        "Finder", "public int indexOf(String needle) { return -1; }",
        "Index of the needle, or -1 when absent.",
        'public void testMissing() { Finder f = new Finder("haystack"); int idx = f.indexOf("zed"); assertEquals(-1, idx); }',
    ),
    record(
        "Meter", "public int reading() { return this.value; }",
        "Raw meter reading.",
        "public void testFullScale() { Meter m = new Meter(); m.fill(); int r = m.reading(); assertEquals(100, r); }",
    ),
    record(
        "Clock", "public long elapsed() { return this.ticks; }",
        "Elapsed tick count.",
        "public void testTwoTicks() { Clock c = new Clock(); c.tick(); c.tick(); long e = c.elapsed(); assertEquals(2L, e); }",
    ),
    record(
        "Circle", "public double ratio() { return 3.14; }",
        "Circumference over diameter.",
        "public void testRatio() { Circle c = new Circle(); double r = c.ratio(); assertEquals(3.14, r); }",
    ),
    record(
        "Sampler", "public float rate() { return this.rate; }",
        "Configured sample rate.",
        "public void testDefaultRate() { Sampler s = new Sampler(); float r = s.rate(); assertEquals(2.5F, r); }",
    ),
    record(
        "Greeter", "public String salute() { return this.word; }",
        "The salutation word.",
        'public void testSalute() { Greeter g = new Greeter("alpha"); String w = g.salute(); assertEquals("alpha", w); }',
    ),
    record(
        "Word", "public char first() { return this.text.charAt(0); }",
        "First character of the word.",
        "public void testFirstChar() { Word w = new Word(\"xenon\"); char c = w.first(); assertEquals('x', c); }",
    ),
    record(
        "Switch", "public boolean state() { return this.on; }",
        "Whether the switch is on.",
        "public void testOn() { Switch s = new Switch(); s.flip(); boolean on = s.state(); assertEquals(true, on); }",
    ),
    record(
        "Cache", "public Object peek(String key) { return this.map.get(key); }",
        "Cached value without promotion, or null.",
        'public void testColdCache() { Cache c = new Cache(); Object v = c.peek("k"); assertEquals(null, v); }',
    ),
    # assertEquals with a variable expected side
    record(
        "Copier", "public String copy(String source) { return source; }",
        "Returns an identical copy.",
        'public void testRoundTrip() { Copier c = new Copier(); String expected = "payload"; String actual = c.copy(expected); assertEquals(expected, actual); }',
    ),
    record(
        "队List", "public Object get(int i) { return this.items[i]; }",
        "Element at position i.",
        "public void testHead() { 队List q = new 队List(); Object first = q.seed(); assertEquals(first, q.get(0)); }",
    ),
    record(
        "Trimmer", "public String trim(String s) { return s.trim(); }",
        "Strips surrounding whitespace.",
        'public void testIdempotent() { Trimmer t = new Trimmer(); String want = t.trim(" a "); String got = t.trim(want); assertEquals(want, got.trim()); }',
    ),
    # assertTrue over various expression shapes
    record(
        "Gate", "public boolean isOpen() { return this.open; }",
        "Whether the gate is open.",
        "public void testOpens() { Gate g = new Gate(); g.open(); boolean open = g.isOpen(); assertTrue(open); }",
    ),
    record(
        "Bag", "public boolean isEmpty() { return this.count == 0; }",
        "True when the bag holds nothing.",
        "public void testFreshBagEmpty() { Bag b = new Bag(); assertTrue(b.isEmpty()); }",
    ),
    record(
        "Index", "public boolean contains(String term) { return this.terms.contains(term); }",
        "Membership test.",
        'public void testIndexed() { Index ix = new Index(); ix.add("term"); assertTrue(ix.contains("term")); }',
    ),
    record(
        "Registry", "public Set keySet() { return this.keys; }",
        "Live view of registered keys.",
        "public void testNoKeys() { Registry r = new Registry(); assertTrue(r.keySet().isEmpty()); }",
    ),
    record(
        "Flags", "public boolean enabled() { return this.mask != 0; }",
        "Whether any flag is set.",
        "public void testMaskSet() { Flags f = new Flags(); f.set(3); assertTrue(f.enabled()); }",
    ),
    record(
        "Validator", "public static boolean accepts(String input) { return input != null; }",
        "Static validity check.",
        'public void testAccepts() { String input = Sample.wellFormed(); assertTrue(Validator.accepts(input)); }',
    ),
    # assertFalse
    record(
        "Gate", "public boolean isOpen() { return this.open; }",
        "Whether the gate is open.",
        "public void testStartsClosed() { Gate g = new Gate(); boolean open = g.isOpen(); assertFalse(open); }",
    ),
    record(
        "Bag", "public boolean isEmpty() { return this.count == 0; }",
        "True when the bag holds nothing.",
        'public void testNotEmptyAfterAdd() { Bag b = new Bag(); b.add("pebble"); assertFalse(b.isEmpty()); }',
    ),
    record(
        "Session", "public boolean expired() { return this.deadline < now(); }",
        "Whether the session has lapsed.",
        "public void testFreshSession() { Session s = new Session(); s.touch(); assertFalse(s.expired()); }",
    ),
    record(
        "Matcher", "public boolean matches(String text) { return this.pattern.test(text); }",
        "Pattern match over the whole text.",
        'public void testNoMatch() { Matcher m = new Matcher("^a"); assertFalse(m.matches("zzz")); }',
    ),
    record(
        "Pool", "public boolean drained() { return this.free == 0; }",
        "Whether every slot is taken.",
        "public void testSlotsRemain() { Pool p = new Pool(4); p.acquire(); assertFalse(p.drained()); }",
    ),
    # assertNull
    record(
        "Cache", "public Object peek(String key) { return this.map.get(key); }",
        "Cached value without promotion, or null.",
        'public void testMissingKey() { Cache c = new Cache(); Object hit = c.peek("absent"); assertNull(hit); }',
    ),
    record(
        "Queue", "public Object poll() { return this.head; }",
        "Removes the head, or null when empty.",
        "public void testPollEmpty() { Queue q = new Queue(); Object head = q.poll(); assertNull(head); }",
    ),
    record(
        "Directory", "public Entry lookup(String name) { return this.entries.get(name); }",
        "Entry registered under the name, if any.",
        'public void testUnknownName() { Directory d = new Directory(); assertNull(d.lookup("ghost")); }',
    ),
    record(
        "Parser", "public Node root() { return this.root; }",
        "Root of the last parse, or null before any parse.",
        "public void testNoParseYet() { Parser p = new Parser(); Node r = p.root(); assertNull(r); }",
    ),
    # assertNotNull
    record(
        "Factory", "public Widget build() { return new Widget(); }",
        "Builds a fresh widget.",
        "public void testBuild() { Factory f = new Factory(); Widget w = f.build(); assertNotNull(w); }",
    ),
    record(
        "Registry", "public Entry find(String key) { return this.entries.get(key); }",
        "Entry for the key, or null.",
        'public void testFindSeeded() { Registry r = new Registry(); r.register("k"); assertNotNull(r.find("k")); }',
    ),
    record(
        "Buffer", "public byte[] drain() { return this.bytes; }",
        "Drains the accumulated bytes.",
        "public void testDrain() { Buffer b = new Buffer(); b.write(7); assertNotNull(b.drain()); }",
    ),
    record(
        "Cursor", "public Row current() { return this.row; }",
        "Row under the cursor.",
        "public void testFirstRow() { Cursor c = new Cursor(); c.advance(); Row row = c.current(); assertNotNull(row); }",
    ),
    # more expected-exception flavours
    record(
        "Divider", "public int divide(int a, int b) { return a / b; }",
        "Integer division. @throws ArithmeticException on a zero divisor",
        "public void testDivideByZero() { Divider d = new Divider(); try { d.divide(6, 0); fail(); } catch (ArithmeticException e) { } }",
    ),
    record(
        "Decoder", "public byte[] decode(String text) { return this.codec.decode(text); }",
        "Decodes base-16 text. @throws IllegalArgumentException when text has odd length",
        'public void testOddLength() { Decoder d = new Decoder(); try { d.decode("abc"); Assert.fail(); } catch (IllegalArgumentException e) { } }',
    ),
    record(
        "Vault", "public void unlock(String code) { this.check(code); }",
        "Opens the vault. @throws IllegalStateException when already open",
        'public void testDoubleUnlock() { Vault v = new Vault(); v.unlock("1234"); try { v.unlock("1234"); fail("expecting exception"); } catch (Exception e) { verifyException(e, "IllegalStateException"); } }',
    ),
    record(
        "Reader", "public String readLine() { return this.source.next(); }",
        "Next line of the source. @throws IOException when the source is closed",
        "public void testReadClosed() { Reader r = new Reader(); r.close(); try { String line = r.readLine(); fail(); } catch (Exception e) { } }",
    ),
    record(
        "Slicer", "public String slice(int from, int to) { return this.text.substring(from, to); }",
        "Substring by bounds. @throws IndexOutOfBoundsException for bad bounds",
        'public void testBackwardBounds() { Slicer s = new Slicer("abc"); try { s.slice(2, 1); fail(); } catch (IndexOutOfBoundsException e) { } }',
    ),
    # multi-assertion tests: trailing pairs and mid-test splits
    record(
        "Inventory", "public int count() { return this.items.size(); }",
        "Number of stocked items.",
        "public void testReceiveOne() { Inventory inv = new Inventory(); Item it = inv.receive(); assertNotNull(it); assertEquals(1, inv.count()); }",
    ),
    record(
        "Tokenizer", "public String next() { return this.tokens.poll(); }",
        "Next token in order.",
        'public void testTwoTokens() { Tokenizer t = new Tokenizer("a b"); String first = t.next(); assertEquals("a", first); String second = t.next(); assertEquals("b", second); }',
    ),
    record(
        "Account", "public int balance() { return this.cents; }",
        "Balance in cents.",
        "public void testDepositWithdraw() { Account a = new Account(); a.deposit(50); assertEquals(50, a.balance()); a.withdraw(20); assertEquals(30, a.balance()); a.close(); assertTrue(a.closed()); }",
    ),
    record(
        "Graph", "public int edges() { return this.edgeCount; }",
        "Total edge count.",
        "public void testLink() { Graph g = new Graph(); Node n1 = g.addNode(); Node n2 = g.addNode(); assertNotNull(n1); g.link(n1, n2); assertEquals(1, g.edges()); }",
    ),
    # prefix breadth: casts, generics, arrays, fields, assignments, escapes
    record(
        "Box", "public Object get() { return this.value; }",
        "The boxed value.",
        "public void testCastBox() { Box b = new Box(); Object o = (Object) b; assertNotNull(o); }",
    ),
    record(
        "Basket", "public boolean isEmpty() { return this.items.isEmpty(); }",
        "Whether the basket is empty.",
        'public void testGenericBasket() { List<String> items = new ArrayList<String>(); items.add("pear"); Basket b = new Basket(items); assertFalse(b.isEmpty()); }',
    ),
    record(
        "Histogram", "public int[] bins() { return this.bins; }",
        "Raw bin counts.",
        "public void testBins() { Histogram h = new Histogram(); h.record(4); int[] bins = h.bins(); assertNotNull(bins); }",
    ),
    record(
        "Point", "public int quadrant() { return this.q; }",
        "Quadrant index of the point.",
        "public void testFieldRead() { Point p = new Point(3, 4); int x = p.x; assertEquals(3, x); }",
    ),
    record(
        "Cursor", "public Row open() { return this.first; }",
        "Opens the cursor at the first row.",
        "public void testLateInit() { Cursor cur; cur = Table.open(); assertNotNull(cur); }",
    ),
    record(
        "Unescaper", "public String unescape(String raw) { return raw.replace(oldSeq, newSeq); }",
        "Expands escape sequences.",
        'public void testNewlineEscape() { Unescaper u = new Unescaper(); String s = u.unescape("a\\nb"); assertEquals("a\\nb", s); }',
    ),
    record(
        "Labeler", "public String label() { return this.label; }",
        "Human-readable label.",
        'public void testCastLabel() { Labeler l = new Labeler(); String s = (String) l.raw(); assertEquals("v", s); }',
    ),
    record(
        "Rect", "public int area() { return this.w * this.h; }",
        "Width times height.",
        "public void testArea() { Rect r = new Rect(0, 0, 10, 20); int area = r.area(); assertEquals(200, area); }",
    ),
    record(
        "Chain", "public Chain next() { return this.tail; }",
        "Next link in the chain.",
        "public void testChainedCalls() { Chain c = new Chain(); Chain last = c.next().next(); assertNull(last); }",
    ),
    record(
        "Wallet", "public long total() { return this.sum; }",
        "Sum over all coins.",
        "public void testOpaqueComparison() { Wallet w = new Wallet(); long sum = w.total(); assertTrue(sum >= 0); }",
    ),
    record(
        "Mixer", "public Blend combine(Paint a, Paint b) { return Blend.of(a, b); }",
        "Combines two paints.",
        "public void testCombine() { Mixer m = new Mixer(); Blend out = m.combine(Paint.RED, Paint.BLUE); assertNotNull(out); }",
    ),
    record(
        "Scales", "public int heavier(int a, int b) { return a > b ? a : b; }",
        "The heavier of two weights.",
        "public void testHeavier() { Scales s = new Scales(); int w = s.heavier(7, 9); assertEquals(9, w); }",
    ),
]

# 队List above would be exotic in a java corpus; swap for plain ascii before use
GRAMMAR_RECORDS = [
    {**r, "class_name": r["class_name"].replace("队List", "RingList"),
     "test": r["test"].replace("队List", "RingList")}
    for r in GRAMMAR_RECORDS
]


def check_grammar_corpus() -> None:
    assert len(GRAMMAR_RECORDS) >= 50, f"only {len(GRAMMAR_RECORDS)} grammar records"
    exception_shapes = 0
    forms_seen = set()
    for i, rec in enumerate(GRAMMAR_RECORDS):
        test = parse_test_method(rec["test"])
        opaque = [s for s in test.statements if isinstance(s, OpaqueStmt)]
        assert not opaque, f"record {i} has opaque statements: {opaque}"
        stripped = strip_oracles(test)
        assert stripped.kind != "none", f"record {i} has no oracle"
        assert not stripped.out_of_grammar, f"record {i} out of grammar: {stripped.out_of_grammar}"
        if stripped.kind == "exception":
            exception_shapes += 1
        for prefix, oracle in stripped.per_oracle_prefixes:
            forms_seen.add(type(getattr(oracle, "form", oracle)).__name__)
            rendered = render_test_method(render_oracle_test(prefix, oracle, "test0"))
            reparsed = strip_oracles(parse_test_method(rendered))
            assert len(reparsed.per_oracle_prefixes) == 1, f"record {i}: round trip split"
            got_prefix, got_oracle = reparsed.per_oracle_prefixes[0]
            assert got_prefix == prefix, f"record {i}: prefix drifted\n{prefix}\n{got_prefix}"
            assert got_oracle == oracle, f"record {i}: oracle drifted\n{oracle}\n{got_oracle}"
    expected_forms = {"Equals", "IsTrue", "IsFalse", "IsNull", "NotNull", "ExpectedException"}
    assert forms_seen == expected_forms, f"missing forms: {expected_forms - forms_seen}"
    assert exception_shapes >= 6, f"only {exception_shapes} exception-shape records"


# --- golden-file fixtures: one assertion case, one exception case ---

KEYED_VALUES = record(
    "KeyedValues",
    "public void removeValue(int index) { this.keys.remove(index); this.values.remove(index); }",
    "Removes a value from the collection.",
    "public void testRemoveValue() { KeyedValues kv; kv = new KeyedValues(); Short short0 = new Short(2); kv.insertValue(0, short0, 2); kv.removeValue(0); int int0 = kv.itemCount(); assertEquals(1, int0); }",
)

CREATE_NUMBER = record(
    "NumberUtils",
    "public static Number createNumber(String str) { return null; }",
    "Turns a string value into a java.lang.Number. @throws NumberFormatException if the value cannot be converted",
    'public void testCreateNumber() { NumberUtils.createNumber("0XT"); }',
)

FIXTURE_VOCAB = "oracle-forge-vocab v1 k=8\nint\t0\t0\t12\nint\t1\t1\t8\n"

GOLDEN_KEYED_VALUES_RESULT = {
    "assertion": "assertEquals(0, int0)",
    "decision": "assertion",
    "exception_score": 0.2,
    "ranked": [
        ["assertEquals(0, int0)", 0.5],
        ["assertEquals(2, int0)", 0.5],
        ["assertEquals(1, int0)", 0.4],
    ],
    "score": 0.5,
}

GOLDEN_KEYED_VALUES_TEST = """public void test0() {
  KeyedValues kv;
  kv = new KeyedValues();
  Short short0 = new Short(2);
  kv.insertValue(0, short0, 2);
  kv.removeValue(0);
  int int0 = kv.itemCount();
  assertEquals(0, int0);
}"""

GOLDEN_CREATE_NUMBER_RESULT = {
    "decision": "exception",
    "exception_score": 0.7,
    "exception_type": "NumberFormatException",
    "ranked": [],
}

GOLDEN_CREATE_NUMBER_TEST = """public void test0() {
  try {
    NumberUtils.createNumber("0XT");
    fail("expecting exception");
  } catch (Exception e) {
    verifyException(e, NumberFormatException);
  }
}"""


def fixture_table() -> GlobalConstantTable:
    return GlobalConstantTable(
        8, {"int": [(Literal("int", "0"), 12), (Literal("int", "1"), 8)]}
    )


def check_goldens() -> None:
    config = RankerConfig()
    scorer = BuiltinHeuristic()
    table = fixture_table()

    stripped = strip_oracles(parse_test_method(KEYED_VALUES["test"]))
    prefix, _ = stripped.per_oracle_prefixes[0]
    context = strip_implementation(
        KEYED_VALUES["focal_method"], KEYED_VALUES["docstring"],
        class_name=KEYED_VALUES["class_name"],
    )
    result = infer_oracle(prefix, context, config, scorer, table)
    got = json.loads(json.dumps(result.to_json()))
    assert got == GOLDEN_KEYED_VALUES_RESULT, f"keyed values drifted:\n{got}"
    rendered = render_test_method(render_oracle_test(prefix, result.oracle, "test0"))
    assert rendered == GOLDEN_KEYED_VALUES_TEST, f"keyed values test drifted:\n{rendered}"

    stripped = strip_oracles(parse_test_method(CREATE_NUMBER["test"]))
    context = strip_implementation(
        CREATE_NUMBER["focal_method"], CREATE_NUMBER["docstring"],
        class_name=CREATE_NUMBER["class_name"],
    )
    result = infer_oracle(stripped.prefix, context, config, scorer, table)
    got = json.loads(json.dumps(result.to_json()))
    assert got == GOLDEN_CREATE_NUMBER_RESULT, f"createNumber drifted:\n{got}"
    rendered = render_test_method(
        render_oracle_test(stripped.prefix, result.oracle, "test0")
    )
    assert rendered == GOLDEN_CREATE_NUMBER_TEST, f"createNumber test drifted:\n{rendered}"


# --- exception corpus: 200 records, 160 negative / 40 positive ---

THROW_TYPES = [
    "IllegalArgumentException", "IllegalStateException", "NumberFormatException",
    "IndexOutOfBoundsException", "IOException", "UnsupportedOperationException",
]

POSITIVE_UNITS = [
    ("Parser", "parse", "String text", "Parses the given source text"),
    ("Decoder", "decode", "String input", "Decodes the encoded payload"),
    ("Loader", "load", "String path", "Loads the resource at the path"),
    ("Splitter", "splitAt", "int pos", "Splits the buffer at pos"),
    ("Account", "withdraw", "int cents", "Withdraws the amount"),
    ("Channel", "send", "String frame", "Transmits one frame"),
    ("Builder", "seal", "", "Finalizes the builder"),
    ("Resolver", "resolve", "String name", "Resolves a symbolic name"),
]

NEGATIVE_UNITS = [
    ("Counter", "total", "int", "Running total of recorded events"),
    ("Meter", "reading", "int", "Instantaneous reading"),
    ("Labeler", "label", "String", "Display label for the unit"),
    ("Gate", "isOpen", "boolean", "Whether the gate is currently open"),
    ("Sink", "drained", "boolean", "Whether the sink has been drained"),
    ("Registry", "find", "Entry", "Entry registered under a key"),
    ("Planner", "nextStep", "Step", "The next planned step"),
    ("Tally", "count", "int", "Number of marks recorded"),
    ("Namer", "shortName", "String", "Abbreviated display name"),
    ("Probe", "sample", "int", "Most recent sampled value"),
]

NOISY_NEGATIVE_DOCS = [
    "Never throws; returns a default on bad input.",
    "Unlike the checked variant, no exception is raised here.",
    "Safe version of parse: swallows every exception internally.",
    "Returns 0 rather than throwing when the register is empty.",
    "Documented to avoid IllegalStateException by design.",
]


def make_positive(i: int, rng: random.Random) -> dict:
    cls, method, param, doc_head = POSITIVE_UNITS[i % len(POSITIVE_UNITS)]
    exc = THROW_TYPES[i % len(THROW_TYPES)]
    documented = i % 10 != 9  # every tenth positive hides the @throws tag
    if param.startswith("int"):
        bad_arg = str(-rng.randint(1, 9))
        param_name = param.split()[1]
        doc_tail = f"@throws {exc} when {param_name} is negative"
    elif param:
        bad_arg = "null"
        param_name = param.split()[1]
        doc_tail = f"@throws {exc} when {param_name} is null or malformed"
    else:
        bad_arg = ""
        doc_tail = f"@throws {exc} when called twice"
    doc = f"{doc_head}. {doc_tail}" if documented else f"{doc_head}."
    focal = f"public void {method}({param}) {{ this.impl.{method}({param.split()[-1] if param else ''}); }}"
    style = i % 4
    if style == 0:
        test = (
            f"public void test{cls}{method.capitalize()}() {{ {cls} obj = new {cls}(); "
            f"try {{ obj.{method}({bad_arg}); fail(); }} catch (Exception e) {{ }} }}"
        )
    elif style == 1:
        test = (
            f"public void testBad{method.capitalize()}() {{ {cls} obj = new {cls}(); "
            f'try {{ obj.{method}({bad_arg}); fail("expecting exception"); }} '
            f"catch ({exc} e) {{ }} }}"
        )
    elif style == 2:
        test = (
            f"public void test{i}() {{ {cls} obj = new {cls}(); obj.prime(); "
            f"try {{ obj.{method}({bad_arg}); Assert.fail(); }} catch (Exception e) {{ }} }}"
        )
    else:
        test = (
            f"public void test{i}() {{ {cls} obj = new {cls}(); "
            f'try {{ obj.{method}({bad_arg}); fail(); }} catch (Exception e) {{ verifyException(e, {exc}); }} }}'
        )
    return record(cls, focal, doc, test)


def make_negative(i: int, rng: random.Random) -> dict:
    cls, method, ret, doc_head = NEGATIVE_UNITS[i % len(NEGATIVE_UNITS)]
    noisy = i % 16 == 15  # ten of 160 negatives mention exceptions anyway
    doc = f"{doc_head}. {NOISY_NEGATIVE_DOCS[i % len(NOISY_NEGATIVE_DOCS)]}" if noisy else f"{doc_head}."
    focal = f"public {ret} {method}() {{ return this.state; }}"
    n = rng.randint(0, 5)
    if ret == "int":
        test = (
            f"public void test{i}() {{ {cls} obj = new {cls}(); "
            + "obj.poke(); " * (i % 3)
            + f"int int0 = obj.{method}(); assertEquals({n}, int0); }}"
        )
    elif ret == "boolean":
        check = "assertTrue" if i % 2 == 0 else "assertFalse"
        test = (
            f"public void test{i}() {{ {cls} obj = new {cls}(); "
            f"boolean bool0 = obj.{method}(); {check}(bool0); }}"
        )
    elif ret == "String":
        test = (
            f'public void test{i}() {{ {cls} obj = new {cls}("seed{n}"); '
            f'String string0 = obj.{method}(); assertEquals("seed{n}", string0); }}'
        )
    else:
        check = "assertNotNull" if i % 2 == 0 else "assertNull"
        test = (
            f"public void test{i}() {{ {cls} obj = new {cls}(); "
            f"{ret} out0 = obj.{method}(); {check}(out0); }}"
        )
    return record(cls, focal, doc, test)


def exception_corpus() -> list[dict]:
    rng = random.Random(7341)
    records = [make_positive(i, rng) for i in range(40)]
    records += [make_negative(i, rng) for i in range(160)]
    rng.shuffle(records)
    labels = [label_exception(parse_test_method(r["test"])) for r in records]
    assert labels.count(1) == 40 and labels.count(0) == 160, (
        f"label skew: {labels.count(1)} positive"
    )
    return records


# --- assertion corpus: calibrated for the constant-table size sweep ---

STRING_TRUTHS = [
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta",
    "eta", "theta", "iota", "kappa", "lambda", "mu",
]
STRING_CLASSES = ["Label", "Tag", "Badge", "Ticket", "Marker", "Stamp"]
BOOL_CLASSES = ["Gate", "Latch", "Valve", "Switch", "Breaker"]
OBJECT_CLASSES = ["Registry", "Catalog", "Index", "Atlas", "Roster"]
INT_CLASSES = ["Counter", "Meter", "Gauge", "Tally", "Odometer", "Turnstile", "Abacus"]
INT_METHODS = ["total", "reading", "level", "count", "distance", "entries", "sum"]

# frequency plan for the int constant table; ties at count 1 sort as text
INT_TRUTH_PLAN = (
    [0] * 10 + [1] * 6 + [2] * 5 + [3] * 4 + [4] * 3 + [5] * 2
    + [7, 100, 97, 53, 41]
)


def assertion_corpus() -> list[dict]:
    records = []
    for i, word in enumerate(STRING_TRUTHS):
        cls = STRING_CLASSES[i % len(STRING_CLASSES)]
        records.append(record(
            cls,
            f"public String title() {{ return this.title; }}",
            "Returns the configured title.",
            f'public void test{i}() {{ {cls} w = new {cls}("{word}"); '
            f'String string0 = w.title(); assertEquals("{word}", string0); }}',
        ))
    for i in range(10):
        cls = BOOL_CLASSES[i % len(BOOL_CLASSES)]
        check = "assertTrue" if i % 2 == 0 else "assertFalse"
        prime = "obj.toggle(); " if i % 2 == 0 else ""
        records.append(record(
            cls,
            "public boolean isOpen() { return this.open; }",
            "Whether the unit is open.",
            f"public void testState{i}() {{ {cls} obj = new {cls}(); {prime}"
            f"boolean bool0 = obj.isOpen(); {check}(bool0); }}",
        ))
    for i in range(10):
        cls = OBJECT_CLASSES[i % len(OBJECT_CLASSES)]
        check = "assertNotNull" if i % 2 == 0 else "assertNull"
        prime = 'obj.register("seed"); ' if i % 2 == 0 else ""
        records.append(record(
            cls,
            "public Entry find(String key) { return this.entries.get(key); }",
            "Entry stored under the key, or null.",
            f"public void testLookup{i}() {{ {cls} obj = new {cls}(); {prime}"
            f'Entry entry0 = obj.find("seed"); {check}(entry0); }}',
        ))
    for i, value in enumerate(INT_TRUTH_PLAN):
        cls = INT_CLASSES[i % len(INT_CLASSES)]
        method = INT_METHODS[i % len(INT_METHODS)]
        prime = "obj.advance(); " * (i % 3)
        records.append(record(
            cls,
            f"public int {method}() {{ return this.value; }}",
            "Current accumulated value.",
            f"public void testValue{i}() {{ {cls} obj = new {cls}(); {prime}"
            f"int int0 = obj.{method}(); assertEquals({value}, int0); }}",
        ))
    return records


EXPECTED_FRACTIONS = {
    0: 32 / 67,
    1: 42 / 67,
    2: 48 / 67,
    4: 57 / 67,
    8: 64 / 67,
    16: 67 / 67,
}


def check_assertion_corpus(records: list[dict]) -> None:
    assert len(records) == 67, len(records)
    rows = k_ablation(records, sorted(EXPECTED_FRACTIONS))
    for row in rows:
        want = EXPECTED_FRACTIONS[row.k]
        assert abs(row.in_vocab_fraction - want) < 1e-9, (
            f"k={row.k}: in_vocab {row.in_vocab_fraction} != planned {want}"
        )
    fractions = [row.in_vocab_fraction for row in rows]
    assert fractions == sorted(fractions), f"not monotone: {fractions}"
    assert 0.45 <= fractions[0] <= 0.55, f"k=0 fraction out of band: {fractions[0]}"


# --- output ---


def write_jsonl(path: Path, records: list[dict]) -> None:
    path.write_text(
        "".join(json.dumps(r, sort_keys=True) + "\n" for r in records),
        encoding="utf-8",
    )


def main() -> int:
    check_grammar_corpus()
    check_goldens()
    exc = exception_corpus()
    asrt = assertion_corpus()
    check_assertion_corpus(asrt)

    FIXTURES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)

    write_jsonl(FIXTURES / "grammar_corpus.jsonl", GRAMMAR_RECORDS)
    write_jsonl(FIXTURES / "keyed_values.jsonl", [KEYED_VALUES])
    write_jsonl(FIXTURES / "create_number.jsonl", [CREATE_NUMBER])
    (FIXTURES / "fixture_vocab.txt").write_text(FIXTURE_VOCAB, encoding="utf-8")
    write_jsonl(FIXTURES / "exception_corpus.jsonl", exc)
    write_jsonl(FIXTURES / "assertion_corpus.jsonl", asrt)

    (GOLDEN / "keyed_values_result.json").write_text(
        json.dumps(GOLDEN_KEYED_VALUES_RESULT, sort_keys=True) + "\n", encoding="utf-8"
    )
    (GOLDEN / "keyed_values_test.txt").write_text(
        GOLDEN_KEYED_VALUES_TEST + "\n", encoding="utf-8"
    )
    (GOLDEN / "create_number_result.json").write_text(
        json.dumps(GOLDEN_CREATE_NUMBER_RESULT, sort_keys=True) + "\n", encoding="utf-8"
    )
    (GOLDEN / "create_number_test.txt").write_text(
        GOLDEN_CREATE_NUMBER_TEST + "\n", encoding="utf-8"
    )
    print(f"grammar corpus: {len(GRAMMAR_RECORDS)} records")
    print(f"exception corpus: {len(exc)} records (40 positive)")
    print(f"assertion corpus: {len(asrt)} records")
    print("golden files verified and written")
    return 0


if __name__ == "__main__":
    sys.exit(main())
