import { describe, expect, it } from "vitest";

import { callsTo, mirrorScore, parseSignature } from "../src/mirror";

const VOCAB = { int: ["0", "1"] };

const KV_PREFIX =
  "KeyedValues kv; kv = new KeyedValues(); Short short0 = new Short(2); " +
  "kv.insertValue(0, short0, 2); kv.removeValue(0); int int0 = kv.itemCount();";
const KV_SIG = "public void removeValue(int index)";
const KV_DOC = "Removes a value from the collection.";

function exception(prefix: string, signature: string, docstring: string): number {
  return mirrorScore(VOCAB, { task: "exception", prefix, signature, docstring });
}

function assertion(candidate: string, prefix = "", vocab: Record<string, string[]> = VOCAB): number {
  return mirrorScore(vocab, { task: "assertion", prefix, signature: "", docstring: "", candidate });
}

describe("exception scoring", () => {
  it("gives the bare prior with no signals", () => {
    expect(exception(KV_PREFIX, KV_SIG, KV_DOC)).toBe(0.2);
  });

  it("adds the docstring bonus for @throws", () => {
    const doc = "Turns a string value into a java.lang.Number. @throws NumberFormatException if the value cannot be converted";
    expect(exception('Number number0 = NumberUtils.createNumber("0xKK");', "public static Number createNumber( String str )", doc)).toBe(0.7);
  });

  it("matches throw tokens case-insensitively", () => {
    expect(exception("", "public int run()", "@THROWS Error always")).toBe(0.7);
    expect(exception("", "public int run()", "May Throws badly")).toBe(0.7);
  });

  it("does not fire on words that merely contain a token", () => {
    expect(exception("", "public int run()", "An exceptional case. IllegalStateException never happens.")).toBe(0.2);
  });

  it("flags a null call argument anywhere in the prefix", () => {
    expect(exception("Widget w = new Widget(); w.accept(null);", "public void poke()", "")).toBe(0.4);
    expect(exception("w.fill(1, null, 2);", "public void poke()", "")).toBe(0.4);
  });

  it("does not flag a null initializer", () => {
    expect(exception("Widget w = null;", "public void poke()", "")).toBe(0.2);
  });

  it("flags a negative literal in an index-named focal slot", () => {
    expect(exception("Box b = new Box(); int int0 = b.get(-1);", "public int get(int index)", "")).toBe(0.4);
  });

  it("ignores negative literals bound to other parameter names", () => {
    expect(exception("Account obj = new Account(); obj.withdraw(-6);", "public void withdraw(int cents)", "")).toBe(0.2);
  });

  it("ignores negative literals passed to other methods", () => {
    expect(exception("Box b = new Box(); b.other(-1);", "public int get(int index)", "")).toBe(0.2);
  });

  it("stacks bonuses and caps the score", () => {
    const score = exception("w.accept(null);", "public void poke()", "@throws Error");
    expect(score).toBe(0.9);
  });
});

describe("assertion scoring", () => {
  it("scores structural checks at the structural weight", () => {
    expect(assertion("assertTrue(bool0)")).toBe(0.4);
    expect(assertion("assertFalse(bool0)")).toBe(0.4);
    expect(assertion("assertNotNull(obj0)")).toBe(0.4);
    expect(assertion("assertNull(obj0)")).toBe(0.4);
  });

  it("scores dictionary constants by rank", () => {
    expect(assertion("assertEquals(0, int0)", KV_PREFIX)).toBe(0.5);
    expect(assertion("assertEquals(1, int0)", KV_PREFIX)).toBe(0.4);
  });

  it("rounds the rank decay to six decimals", () => {
    expect(assertion("assertEquals(2, int0)", "", { int: ["0", "1", "2"] })).toBe(0.366667);
  });

  it("scores prefix-visible values as local", () => {
    expect(assertion("assertEquals(2, int0)", KV_PREFIX)).toBe(0.5);
  });

  it("prefers the dictionary when a constant is also in the prefix", () => {
    // "0" appears in the prefix too, but rank 0 decay happens to give
    // the same number the local path would; rank 1 shows the difference
    expect(assertion("assertEquals(1, int0)", "w.run(1); int int0 = w.count();")).toBe(0.4);
  });

  it("does not treat digits inside identifiers as prefix values", () => {
    expect(assertion("assertEquals(7, int0)", "int int0 = w.run();", { int: [] })).toBe(0.4);
    expect(assertion("assertEquals(0, int0)", "int int0 = w.run();", { int: [] })).toBe(0.4);
  });

  it("matches quoted strings exactly", () => {
    const prefix = 'String string0 = w.name("alpha beta");';
    expect(assertion('assertEquals("alpha beta", string0)', prefix, { int: [] })).toBe(0.5);
    expect(assertion('assertEquals("alpha", string0)', prefix, { int: [] })).toBe(0.4);
  });

  it("matches negative expected values on token boundaries", () => {
    expect(assertion("assertEquals(-1, int0)", "int int0 = w.run(-1);", { int: [] })).toBe(0.5);
    expect(assertion("assertEquals(-1, int0)", "int int0 = w.run(21);", { int: [] })).toBe(0.4);
  });
});

describe("signature parsing", () => {
  it("reads name and parameters", () => {
    expect(parseSignature("public void removeValue(int index)")).toEqual({
      name: "removeValue",
      params: [{ type: "int", name: "index" }],
    });
  });

  it("handles spaced corpus-style signatures", () => {
    expect(parseSignature("public static Number createNumber( String str )")).toEqual({
      name: "createNumber",
      params: [{ type: "String", name: "str" }],
    });
  });

  it("keeps generic commas inside one parameter", () => {
    expect(parseSignature("public List<String> pick(Map<String, Integer> m, int i)")).toEqual({
      name: "pick",
      params: [
        { type: "Map<String, Integer>", name: "m" },
        { type: "int", name: "i" },
      ],
    });
  });

  it("returns null without a parameter list", () => {
    expect(parseSignature("not a signature")).toBeNull();
    expect(parseSignature("")).toBeNull();
  });
});

describe("call extraction", () => {
  it("finds arguments of the named call", () => {
    expect(callsTo("w.set(1, 2); w.set(3);", "set")).toEqual([
      ["1", " 2"],
      ["3"],
    ]);
  });

  it("keeps nested calls inside one argument", () => {
    expect(callsTo("w.set(outer(inner(-1)), 2);", "set")).toEqual([["outer(inner(-1))", " 2"]]);
  });

  it("does not match a name suffix", () => {
    expect(callsTo("w.reset(9);", "set")).toEqual([]);
  });

  it("handles empty argument lists", () => {
    expect(callsTo("w.set();", "set")).toEqual([[]]);
  });
});
