import assert from "node:assert/strict";
import { test } from "node:test";

import type { WireNode } from "../src/api.js";
import { decodeState, encodeState } from "../src/urlState.js";

const FILTER: WireNode = {
  and: [
    { field: "Contracting_Authority_Country", op: "equal", args: ["Belgium"] },
    { or: [
      { field: "CPV_Code", op: "begins_with", args: ["301"] },
      { field: "CPV_Code", op: "begins_with", args: ["302"] },
    ]},
    { field: "Contract_Value_Euros", op: "greater", args: [1000000] },
  ],
};

test("explorations round-trip through the URL fragment", () => {
  const state = {
    tab: "browse" as const,
    filter: FILTER,
    sort: { field: "Contract_Value_Euros", direction: "desc" as const },
    offset: 100,
  };
  assert.deepEqual(decodeState(encodeState(state)), state);
});

test("minimal state stays minimal", () => {
  const state = { tab: "quest" as const };
  const encoded = encodeState(state);
  assert.ok(!encoded.includes("filter"));
  assert.deepEqual(decodeState(encoded), state);
});

test("garbage fragments fall back to a fresh browse view", () => {
  assert.equal(decodeState("#tab=nope&filter={broken").tab, "browse");
  assert.equal(decodeState("").tab, "browse");
});
