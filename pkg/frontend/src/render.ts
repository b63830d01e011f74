/** HTML rendering for the table view.
 *
 * Renderers are pure string builders so they can be tested without a
 * browser; main.ts injects the result and attaches event handlers.
 * Hidden hands are rendered only as counts — the observation payload
 * never contains them.
 */

import {
  canPass,
  canSubmit,
  cardEnabled,
  isYourTurn,
  seatsAfter,
  summarize,
} from "./state.js";
import type { TableState } from "./state.js";
import { RANK_CHARS } from "./types.js";
import type { Observation, PlayedMove, Seat } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const SEAT_LABELS: Record<Seat, string> = {
  landlord: "Landlord",
  down: "Peasant (down)",
  up: "Peasant (up)",
};

function describeMove(move: PlayedMove): string {
  const what = move.cards === "" ? "Pass" : `${move.cards} (${move.category})`;
  return `${SEAT_LABELS[move.position]}: ${what}`;
}

/** The viewer's hand as selectable card buttons. */
export function renderHand(state: TableState): string {
  const cards = [...state.observation.your_hand];
  const buttons = cards.map((card, index) => {
    const selected = state.selection.includes(index);
    const enabled = isYourTurn(state.observation) && cardEnabled(state, index);
    const classes = ["card", selected ? "selected" : "", enabled ? "" : "greyed"]
      .filter(Boolean)
      .join(" ");
    const disabled = enabled ? "" : " disabled";
    return `<button class="${classes}" data-card-index="${index}"${disabled}>${escapeHtml(card)}</button>`;
  });
  return `<div id="hand">${buttons.join("")}</div>`;
}

/** Opponent seats shown as card counts only. */
export function renderOpponents(observation: Observation): string {
  const rows = seatsAfter(observation.your_position)
    .map(
      (seat) =>
        `<div class="opponent" data-seat="${seat}">${SEAT_LABELS[seat]}: ` +
        `${observation.hand_counts[seat]} cards</div>`,
    )
    .join("");
  return `<div id="opponents">${rows}</div>`;
}

export function renderHistory(observation: Observation): string {
  const items = observation.history
    .map((move) => `<li>${escapeHtml(describeMove(move))}</li>`)
    .join("");
  const trick =
    observation.last_move === null
      ? "You lead this trick."
      : `To beat: ${escapeHtml(describeMove(observation.last_move))}`;
  return (
    `<div id="history"><div id="trick">${trick}</div>` +
    `<div>Bombs played: ${observation.bombs_played}</div><ol>${items}</ol></div>`
  );
}

/** Advisory overlay panels; rendered only when the server sends them. */
export function renderOverlays(observation: Observation, coachPWin?: number): string {
  const parts: string[] = [];
  if (coachPWin !== undefined) {
    const pct = (coachPWin * 100).toFixed(1);
    parts.push(
      `<div id="coach-gauge">Coach landlord win estimate: <meter min="0" max="100" ` +
        `value="${pct}"></meter> ${pct}%</div>`,
    );
  }
  const expected = observation.overlays.expected_hand;
  if (expected) {
    const bars = expected.counts
      .map((count, rank) => {
        const height = Math.min(4, Math.max(0, count));
        return `<div class="bar" data-rank="${RANK_CHARS[rank]}" style="--h:${height.toFixed(2)}">${
          RANK_CHARS[rank]
        }: ${count.toFixed(2)}</div>`;
      })
      .join("");
    parts.push(
      `<div id="expected-hand">Expected ${SEAT_LABELS[expected.position]} hand:` +
        `<div class="bars">${bars}</div></div>`,
    );
  }
  return `<div id="overlays">${parts.join("")}</div>`;
}

export function renderControls(state: TableState): string {
  const yourTurn = isYourTurn(state.observation);
  const submit = yourTurn && canSubmit(state) ? "" : " disabled";
  const pass = yourTurn && canPass(state) ? "" : " disabled";
  return (
    `<div id="controls">` +
    `<button id="submit"${submit}>Play selected</button>` +
    `<button id="pass"${pass}>Pass</button>` +
    `<button id="clear">Clear</button>` +
    `</div>`
  );
}

/** Result screen with the bomb-doubled score breakdown. */
export function renderSummary(observation: Observation): string {
  const summary = summarize(observation);
  const sign = summary.yourPoints >= 0 ? "+" : "−";
  const breakdown =
    summary.bombs > 0
      ? `1 base × 2^${summary.bombs} bombs = ${sign}${Math.abs(summary.yourPoints)}`
      : `${sign}${Math.abs(summary.yourPoints)}`;
  return (
    `<div id="summary"><h2>${summary.winnerSide === "landlord" ? "Landlord" : "Peasants"} win` +
    `</h2><p>You ${summary.youWon ? "won" : "lost"}: ${breakdown}</p>` +
    `<button id="rematch">Rematch</button></div>`
  );
}

export function renderTable(state: TableState, coachPWin?: number): string {
  const observation = state.observation;
  const status = observation.terminal
    ? renderSummary(observation)
    : `<div id="status">${isYourTurn(observation) ? "Your turn." : "Waiting…"}</div>`;
  return [
    renderOpponents(observation),
    renderHistory(observation),
    renderOverlays(observation, coachPWin),
    renderHand(state),
    renderControls(state),
    status,
  ].join("\n");
}
