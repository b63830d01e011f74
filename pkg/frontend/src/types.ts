/** Wire payload types for the play service (protocol version 1).
 *
 * Card strings use the rank alphabet `3456789TJQKA2BR` in ascending
 * order; an empty `cards` string means Pass. The server's legal-move
 * list is authoritative — the client never computes game rules beyond
 * convenience highlighting.
 */

export const PROTOCOL_VERSION = 1;

/** Ascending rank alphabet; B = black joker, R = red joker. */
export const RANK_CHARS = "3456789TJQKA2BR";

export type Seat = "landlord" | "down" | "up";

export const SEATS: readonly Seat[] = ["landlord", "down", "up"];

export interface HealthDoc {
  status: string;
  version: string;
  protocol_version: number;
}

export interface MoveDoc {
  cards: string;
  category: string;
}

export interface PlayedMove extends MoveDoc {
  position: Seat;
}

export interface ExpectedHandOverlay {
  position: Seat;
  counts: number[];
}

export interface ObservationOverlays {
  expected_hand?: ExpectedHandOverlay;
}

export interface Observation {
  protocol_version: number;
  session_id: string;
  your_position: Seat;
  current_player: Seat;
  your_hand: string;
  hand_counts: Record<Seat, number>;
  history: PlayedMove[];
  last_move: PlayedMove | null;
  bombs_played: number;
  terminal: boolean;
  winner_side: "landlord" | "peasants" | null;
  legal_moves: MoveDoc[];
  payoff?: Record<Seat, number>;
  overlays: ObservationOverlays;
}

export interface SessionOverlays {
  coach_p_win?: number;
}

export interface CreateSessionResponse {
  session_id: string;
  human_position: Seat;
  bot_replies: PlayedMove[];
  observation: Observation;
  overlays: SessionOverlays;
}

export interface MoveResponse {
  accepted: MoveDoc;
  bot_replies: PlayedMove[];
  observation: Observation;
}

export interface CreateSessionRequest {
  human_position?: Seat;
  seed?: number;
  deal?: string;
}
