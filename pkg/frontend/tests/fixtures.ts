import type { Observation } from "../src/types.js";

/** A mid-game observation: viewer is the down peasant holding a small
 * hand, responding to a landlord pair of sixes. */
export function sampleObservation(overrides: Partial<Observation> = {}): Observation {
  return {
    protocol_version: 1,
    session_id: "abc123",
    your_position: "down",
    current_player: "down",
    your_hand: "3345566778TT",
    hand_counts: { landlord: 18, down: 12, up: 17 },
    history: [{ position: "landlord", cards: "66", category: "Pair" }],
    last_move: { position: "landlord", cards: "66", category: "Pair" },
    bombs_played: 0,
    terminal: false,
    winner_side: null,
    legal_moves: [
      { cards: "", category: "Pass" },
      { cards: "77", category: "Pair" },
      { cards: "TT", category: "Pair" },
    ],
    overlays: {},
    ...overrides,
  };
}
