/** Browser entry point: wires the client, state, and renderer. */

import { PlayClient, ServiceError } from "./client.js";
import { clearSelection, newTableState, selectionCards, toggleCard } from "./state.js";
import type { TableState } from "./state.js";
import { renderTable } from "./render.js";
import type { Seat } from "./types.js";

interface App {
  client: PlayClient;
  sessionId: string;
  state: TableState;
  coachPWin?: number;
  root: HTMLElement;
  errorBox: HTMLElement;
}

function draw(app: App): void {
  app.root.innerHTML = renderTable(app.state, app.coachPWin);
  for (const button of app.root.querySelectorAll<HTMLButtonElement>("[data-card-index]")) {
    button.addEventListener("click", () => {
      app.state = toggleCard(app.state, Number(button.dataset.cardIndex));
      draw(app);
    });
  }
  app.root.querySelector("#clear")?.addEventListener("click", () => {
    app.state = clearSelection(app.state);
    draw(app);
  });
  app.root.querySelector("#submit")?.addEventListener("click", () => {
    void submit(app, selectionCards(app.state));
  });
  app.root.querySelector("#pass")?.addEventListener("click", () => {
    void submit(app, "");
  });
  app.root.querySelector("#rematch")?.addEventListener("click", () => {
    void start(app.root, app.errorBox, app.client, app.state.observation.your_position);
  });
}

async function submit(app: App, cards: string): Promise<void> {
  try {
    const response = await app.client.submitMove(app.sessionId, cards);
    app.state = newTableState(response.observation);
    app.errorBox.textContent = "";
  } catch (error) {
    // surface server rejections verbatim; re-read after a lost race
    app.errorBox.textContent = String(error);
    if (error instanceof ServiceError && error.status === 409) {
      app.state = newTableState(await app.client.observation(app.sessionId));
    }
  }
  draw(app);
}

export async function start(
  root: HTMLElement,
  errorBox: HTMLElement,
  client: PlayClient,
  position: Seat = "landlord",
): Promise<App> {
  const created = await client.createSession({ human_position: position });
  const app: App = {
    client,
    sessionId: created.session_id,
    state: newTableState(created.observation),
    coachPWin: created.overlays.coach_p_win,
    root,
    errorBox,
  };
  draw(app);
  return app;
}

if (typeof document !== "undefined" && document.getElementById("table")) {
  const client = new PlayClient("");
  void start(
    document.getElementById("table") as HTMLElement,
    document.getElementById("errors") as HTMLElement,
    client,
  );
}
