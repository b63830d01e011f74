/** Pure view-state logic: card selection and legal-move highlighting.
 *
 * UI state is a function of the last observation plus the local
 * selection. The selection is a set of indices into `your_hand` (the
 * hand string is in ascending rank order, so an index set maps to a
 * canonical ascending card string). The server's legal-move list is
 * authoritative: a card stays enabled while the selection extended by
 * that card is still contained in at least one legal move; others grey
 * out. Submit is enabled only when the selection equals a legal move
 * exactly.
 */

import { RANK_CHARS, SEATS } from "./types.js";
import type { MoveDoc, Observation, Seat } from "./types.js";

export interface TableState {
  observation: Observation;
  /** Sorted indices into observation.your_hand. */
  selection: number[];
}

export function newTableState(observation: Observation): TableState {
  return { observation, selection: [] };
}

export function rankIndex(card: string): number {
  const i = RANK_CHARS.indexOf(card);
  if (i < 0) throw new Error(`unknown card ${card}`);
  return i;
}

/** Per-rank counts (length 15) of an ascending card string. */
export function cardCounts(cards: string): number[] {
  const counts = new Array<number>(RANK_CHARS.length).fill(0);
  for (const ch of cards) counts[rankIndex(ch)] = (counts[rankIndex(ch)] ?? 0) + 1;
  return counts;
}

function isSubMultiset(inner: number[], outer: number[]): boolean {
  return inner.every((n, i) => n <= (outer[i] ?? 0));
}

/** The selected cards as a canonical ascending string. */
export function selectionCards(state: TableState): string {
  return state.selection.map((i) => state.observation.your_hand[i]).join("");
}

/** Legal moves that contain the current selection as a sub-multiset. */
export function matchingMoves(state: TableState): MoveDoc[] {
  const selected = cardCounts(selectionCards(state));
  return state.observation.legal_moves.filter(
    (move) => move.cards !== "" && isSubMultiset(selected, cardCounts(move.cards)),
  );
}

/** Whether the hand card at `index` may still be toggled on. */
export function cardEnabled(state: TableState, index: number): boolean {
  if (state.selection.includes(index)) return true; // always deselectable
  const card = state.observation.your_hand[index];
  if (card === undefined) return false;
  const extended = cardCounts(selectionCards(state));
  extended[rankIndex(card)] = (extended[rankIndex(card)] ?? 0) + 1;
  return state.observation.legal_moves.some(
    (move) => move.cards !== "" && isSubMultiset(extended, cardCounts(move.cards)),
  );
}

/** Toggle a card in or out of the selection; ignores disabled cards. */
export function toggleCard(state: TableState, index: number): TableState {
  if (state.selection.includes(index)) {
    return { ...state, selection: state.selection.filter((i) => i !== index) };
  }
  if (!cardEnabled(state, index)) return state;
  return { ...state, selection: [...state.selection, index].sort((a, b) => a - b) };
}

export function clearSelection(state: TableState): TableState {
  return { ...state, selection: [] };
}

/** Submit is enabled only when the selection is exactly a legal move. */
export function canSubmit(state: TableState): boolean {
  const cards = selectionCards(state);
  return cards !== "" && state.observation.legal_moves.some((m) => m.cards === cards);
}

/** Pass is enabled iff the server lists the empty move. */
export function canPass(state: TableState): boolean {
  return state.observation.legal_moves.some((m) => m.cards === "");
}

export function isYourTurn(observation: Observation): boolean {
  return !observation.terminal && observation.current_player === observation.your_position;
}

/** Seats in play order starting after the viewer. */
export function seatsAfter(viewer: Seat): Seat[] {
  const start = SEATS.indexOf(viewer);
  return [1, 2].map((offset) => SEATS[(start + offset) % 3] as Seat);
}

export interface GameSummary {
  winnerSide: "landlord" | "peasants";
  youWon: boolean;
  bombs: number;
  /** Signed points for the viewer: base 1 doubled per bomb or rocket. */
  yourPoints: number;
}

/** Result-screen summary; only valid for terminal observations. */
export function summarize(observation: Observation): GameSummary {
  if (!observation.terminal || observation.winner_side === null) {
    throw new Error("game is not over");
  }
  const viewerSide = observation.your_position === "landlord" ? "landlord" : "peasants";
  const payoff = observation.payoff?.[observation.your_position] ?? 0;
  return {
    winnerSide: observation.winner_side,
    youWon: observation.winner_side === viewerSide,
    bombs: observation.bombs_played,
    yourPoints: payoff,
  };
}
