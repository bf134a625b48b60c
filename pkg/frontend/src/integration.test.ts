/** Live-server checks: set API_BASE to a served fixture dataset, e.g.
 *
 *   python demos/make_fixture_dataset.py /tmp/fixture
 *   attainrec serve --data /tmp/fixture --port 8080 &
 *   API_BASE=http://127.0.0.1:8080 npm run test:integration
 */
import { describe, expect, it } from "vitest";

import { ApiClient } from "./api.js";
import { newGameQuery, sampleQuery, strategyGenreQuery } from "./presets.js";

const base = process.env.API_BASE;
const FIXTURE_PLAYER = "76561197960653976";

describe.skipIf(!base)("against a live fixture server", () => {
  const client = new ApiClient(base ?? "");

  it("renders the preset sample query's single row", async () => {
    const response = await client.runQuery(sampleQuery(FIXTURE_PLAYER));
    expect(response.columns).toEqual(["b.name", "b.cost", "avg"]);
    expect(response.rows).toHaveLength(1);
    expect(response.rows[0][0]).toBe("g2");
    expect(response.rows[0][2]).toBeCloseTo(0.6, 12);
  });

  it("every refinement text parses server-side and narrows the chain", async () => {
    const newGame = await client.runQuery(newGameQuery(FIXTURE_PLAYER));
    expect(newGame.rows.map((r) => r[0])).toEqual(["g2"]);

    // the fixture tags g2 as Action, so the Strategy restriction empties it
    const strategy = await client.runQuery(strategyGenreQuery(FIXTURE_PLAYER));
    expect(strategy.rows).toEqual([]);
  });

  it("matches the server's own recommendation endpoint", async () => {
    const viaQuery = await client.runQuery(newGameQuery(FIXTURE_PLAYER));
    const viaEndpoint = await client.recommendations(FIXTURE_PLAYER, {
      excludeOwned: true,
    });
    expect(viaEndpoint.rows).toEqual(viaQuery.rows);
  });

  it("serves schema hints and histograms", async () => {
    const schema = await client.schema();
    const players = schema.vertices.find((v) => v.kind === "Player");
    expect(players?.count).toBe(3);
    const specs = await client.attainmentHistograms(10, true);
    expect(specs.length).toBeGreaterThan(0);
    for (const spec of specs) {
      const width = spec.edges[1] - spec.edges[0];
      const mass = spec.densities.reduce((acc, d) => acc + d * width, 0);
      expect(mass).toBeCloseTo(1.0, 6);
    }
  });
});
