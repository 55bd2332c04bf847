// Action controls. Enabled state mirrors the server's legal-action list
// exactly: no list entry, no control. The raise slider bounds come from
// the server; switch selection is capped by the server's max_cards.

import { LegalAction, raiseBounds } from "./viewmodel.js";

export interface ActionBarState {
  busy: boolean;
  error: string | null;
}

export function renderActions(
  container: HTMLElement,
  actions: LegalAction[],
  onSubmit: (action: string) => void,
  state: ActionBarState = { busy: false, error: null },
): void {
  container.replaceChildren();
  const bar = document.createElement("div");
  bar.className = "action-bar";

  if (state.error) {
    const err = document.createElement("div");
    err.className = "action-error";
    err.textContent = state.error; // engine reason, verbatim
    bar.append(err);
  }

  const simple = actions.filter(
    (a): a is Extract<LegalAction, { text: string }> => "text" in a,
  );
  for (const action of simple) {
    const btn = document.createElement("button");
    btn.className = `act act-${action.kind}`;
    btn.textContent = action.text;
    btn.disabled = state.busy;
    btn.addEventListener("click", () => onSubmit(action.text));
    bar.append(btn);
  }

  const bounds = raiseBounds(actions);
  if (bounds) {
    const wrap = document.createElement("div");
    wrap.className = "raise";
    const slider = document.createElement("input");
    slider.type = "range";
    slider.className = "raise-slider";
    slider.min = String(bounds.min);
    slider.max = String(bounds.max);
    slider.value = String(bounds.min);
    const label = document.createElement("span");
    label.className = "raise-value";
    label.textContent = String(bounds.min);
    slider.addEventListener("input", () => {
      label.textContent = slider.value;
    });
    const btn = document.createElement("button");
    btn.className = "act act-raise";
    btn.textContent = "Raise";
    btn.disabled = state.busy;
    btn.addEventListener("click", () => onSubmit(`Raise to ${slider.value}.`));
    wrap.append(slider, label, btn);
    bar.append(wrap);
  }

  const switchAction = actions.find((a) => a.kind === "switch");
  if (switchAction && switchAction.kind === "switch") {
    const wrap = document.createElement("div");
    wrap.className = "switch";
    const selected = new Set<string>();
    for (const card of switchAction.hand) {
      const toggle = document.createElement("button");
      toggle.className = "switch-card";
      toggle.textContent = card;
      toggle.addEventListener("click", () => {
        if (selected.has(card)) {
          selected.delete(card);
          toggle.classList.remove("selected");
        } else if (selected.size < switchAction.max_cards) {
          selected.add(card);
          toggle.classList.add("selected");
        }
      });
      wrap.append(toggle);
    }
    const btn = document.createElement("button");
    btn.className = "act act-switch";
    btn.textContent = "Switch";
    btn.disabled = state.busy;
    btn.addEventListener("click", () => {
      const picked = switchAction.hand.filter((c) => selected.has(c));
      onSubmit(picked.length ? `Switch ${picked.join(" ")}.` : "Switch 0.");
    });
    wrap.append(btn);
    bar.append(wrap);
  }

  if (!actions.length) {
    const idle = document.createElement("div");
    idle.className = "waiting";
    idle.textContent = state.busy ? "sending…" : "waiting for the table…";
    bar.append(idle);
  }
  container.append(bar);
}
