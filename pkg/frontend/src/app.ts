// Wiring: editor screen -> table screen, long-poll refresh loop, one
// in-flight action at a time.

import { ApiClient, ApiError, SessionInfo, freshKey } from "./client.js";
import { renderActions } from "./actions.js";
import { renderEditor } from "./editor.js";
import { renderTable } from "./table.js";
import type { ViewPayload } from "./viewmodel.js";

export interface AppHandles {
  stop: () => void;
  submit: (action: string) => Promise<void>;
  refresh: () => Promise<ViewPayload>;
}

export function startTable(
  client: ApiClient,
  session: SessionInfo,
  seat: string,
  tableEl: HTMLElement,
  actionsEl: HTMLElement,
): AppHandles {
  const token = session.tokens[seat];
  let version = 0;
  let busy = false;
  let lastError: string | null = null;
  let stopped = false;
  let inFlightKey: string | null = null;

  async function refresh(): Promise<ViewPayload> {
    const payload = await client.view(session.session_id, token);
    version = payload.version;
    renderTable(tableEl, payload);
    renderActions(actionsEl, payload.your_turn ? payload.legal_actions : [], submit, {
      busy,
      error: lastError,
    });
    return payload;
  }

  async function submit(action: string): Promise<void> {
    if (busy) return; // optimistic lock: one action in flight
    busy = true;
    inFlightKey = freshKey();
    lastError = null;
    try {
      await client.act(session.session_id, token, action, inFlightKey);
    } catch (err) {
      lastError = err instanceof ApiError ? err.detail : String(err);
    } finally {
      busy = false;
      inFlightKey = null;
    }
    await refresh();
  }

  async function pollLoop(): Promise<void> {
    while (!stopped) {
      try {
        const events = await client.events(session.session_id, token, version, 15000);
        if (stopped) return;
        if (events.version > version) {
          await refresh();
        }
        if (events.status === "finished") return;
      } catch {
        await new Promise((resolve) => setTimeout(resolve, 500));
      }
    }
  }

  void refresh().then(() => void pollLoop());
  return {
    stop: () => {
      stopped = true;
    },
    submit,
    refresh,
  };
}

export function startApp(root: HTMLElement, base: string): void {
  const client = new ApiClient(base);
  const editorEl = document.createElement("div");
  const tableEl = document.createElement("div");
  const actionsEl = document.createElement("div");
  root.replaceChildren(editorEl, tableEl, actionsEl);

  renderEditor(editorEl, client, (req) => {
    void client
      .createSession(req.script, { seed: req.seed, bots: req.bots })
      .then((session) => {
        const human = session.players.find((p) => !req.bots.includes(p)) ?? session.players[0];
        editorEl.replaceChildren();
        startTable(client, session, human, tableEl, actionsEl);
      })
      .catch((err) => {
        const msg = document.createElement("div");
        msg.className = "diag error";
        msg.textContent = String(err);
        editorEl.append(msg);
      });
  });
}
