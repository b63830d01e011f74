import { describe, expect, it } from "vitest";

import {
  renderControls,
  renderHand,
  renderOpponents,
  renderOverlays,
  renderSummary,
  renderTable,
} from "../src/render.js";
import { newTableState, toggleCard } from "../src/state.js";
import { sampleObservation } from "./fixtures.js";

describe("hand rendering", () => {
  it("renders one selectable button per card of a 20-card hand", () => {
    const hand = "33445566778899TTJJQQ";
    const obs = sampleObservation({
      your_hand: hand,
      legal_moves: [{ cards: hand, category: "ChainPair" }],
    });
    const html = renderHand(newTableState(obs));
    expect(html.match(/data-card-index=/g)).toHaveLength(20);
    expect(html.match(/<button/g)).toHaveLength(20);
  });

  it("greys out cards that extend no legal move", () => {
    const html = renderHand(newTableState(sampleObservation()));
    expect(html).toContain("greyed");
    // the two Ts begin a legal pair and stay enabled
    expect(html).toMatch(/<button class="card" data-card-index="10">/);
  });

  it("marks selected cards", () => {
    const state = toggleCard(newTableState(sampleObservation()), 10);
    expect(renderHand(state)).toContain("selected");
  });
});

describe("table rendering", () => {
  it("shows hidden hands only as counts", () => {
    const obs = sampleObservation();
    const html = renderOpponents(obs);
    expect(html).toContain("18 cards");
    expect(html).toContain("17 cards");
    expect(html).not.toContain(obs.your_hand);
  });

  it("enables Pass and Submit per the legal list and selection", () => {
    let state = newTableState(sampleObservation());
    expect(renderControls(state)).toContain('id="pass"');
    expect(renderControls(state)).toContain('id="submit" disabled');
    state = toggleCard(state, 10);
    state = toggleCard(state, 11);
    expect(renderControls(state)).toContain('id="submit">');
    expect(renderControls(state)).toContain('id="pass">');
  });

  it("renders overlay panels only when present", () => {
    const bare = renderOverlays(sampleObservation());
    expect(bare).not.toContain("coach-gauge");
    expect(bare).not.toContain("expected-hand");
    const obs = sampleObservation({
      overlays: { expected_hand: { position: "up", counts: new Array(15).fill(1.13) } },
    });
    const html = renderOverlays(obs, 0.731);
    expect(html).toContain("73.1%");
    const bars = html.match(/class="bar"/g);
    expect(bars).toHaveLength(15);
  });

  it("shows the bomb-doubled result screen when terminal", () => {
    const obs = sampleObservation({
      terminal: true,
      winner_side: "landlord",
      bombs_played: 1,
      legal_moves: [],
      payoff: { landlord: 4, down: -2, up: -2 },
    });
    const html = renderSummary(obs);
    expect(html).toContain("Landlord win");
    expect(html).toContain("2^1");
    expect(html).toContain("−2");
    expect(renderTable(newTableState(obs))).toContain('id="rematch"');
  });
});
