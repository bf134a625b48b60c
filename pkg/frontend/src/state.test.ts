import { describe, expect, it } from "vitest";

import { RequestSequencer } from "./state.js";
import { errorSnippet, formatCell } from "./render.js";

describe("RequestSequencer", () => {
  it("accepts only the newest request", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    const b = seq.begin();
    expect(seq.accept(a)).toBe(false); // superseded by b
    expect(seq.accept(b)).toBe(true);
  });

  it("ignores double answers", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    expect(seq.accept(a)).toBe(true);
    expect(seq.accept(a)).toBe(false);
  });

  it("keeps accepting when responses arrive in order", () => {
    const seq = new RequestSequencer();
    const a = seq.begin();
    expect(seq.accept(a)).toBe(true);
    const b = seq.begin();
    expect(seq.accept(b)).toBe(true);
  });
});

describe("errorSnippet", () => {
  it("points a caret at the error column", () => {
    expect(errorSnippet("SELECT b.name", 1, 8)).toBe("SELECT b.name\n       ^");
  });

  it("handles multi-line queries", () => {
    const text = "SELECT b.name\nPATTERNS V_X(b)";
    expect(errorSnippet(text, 2, 10)).toBe("PATTERNS V_X(b)\n         ^");
  });

  it("clamps out-of-range positions", () => {
    expect(errorSnippet("ab", 1, 99)).toBe("ab\n  ^");
    expect(errorSnippet("ab", 9, 1)).toBe("");
  });
});

describe("formatCell", () => {
  it("matches the CLI rendering of floats and nulls", () => {
    expect(formatCell(null)).toBe("");
    expect(formatCell(0.6000000000000001)).toBe("0.6");
    expect(formatCell(19.99)).toBe("19.99");
    expect(formatCell("g2")).toBe("g2");
    expect(formatCell(5)).toBe("5");
  });
});
