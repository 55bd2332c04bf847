// Script editor: a textarea, server-side validation with inline
// diagnostics, and a launch form (seed, bot seats). Validation always goes
// to the server; the client judges nothing itself.

import { ApiClient } from "./client.js";

export interface LaunchRequest {
  script: string;
  seed: number | undefined;
  bots: string[];
}

export function renderEditor(
  container: HTMLElement,
  client: ApiClient,
  onLaunch: (req: LaunchRequest) => void,
  initialScript = "",
): void {
  container.replaceChildren();
  const panel = document.createElement("div");
  panel.className = "editor";

  const area = document.createElement("textarea");
  area.className = "editor-script";
  area.rows = 14;
  area.value = initialScript;
  panel.append(area);

  const diag = document.createElement("div");
  diag.className = "diagnostics";
  panel.append(diag);

  const controls = document.createElement("div");
  controls.className = "editor-controls";

  const seedInput = document.createElement("input");
  seedInput.className = "seed";
  seedInput.placeholder = "seed (optional)";
  controls.append(seedInput);

  const botsInput = document.createElement("input");
  botsInput.className = "bots";
  botsInput.placeholder = "bot seats, e.g. p2,p3,p4";
  controls.append(botsInput);

  const validateBtn = document.createElement("button");
  validateBtn.className = "validate";
  validateBtn.textContent = "Validate";
  controls.append(validateBtn);

  const launchBtn = document.createElement("button");
  launchBtn.className = "launch";
  launchBtn.textContent = "Launch table";
  launchBtn.disabled = true;
  controls.append(launchBtn);

  panel.append(controls);
  container.append(panel);

  async function validate(): Promise<boolean> {
    diag.replaceChildren();
    try {
      const result = await client.validateScript(area.value);
      if (result.valid) {
        const ok = document.createElement("div");
        ok.className = "diag ok";
        ok.textContent = "script is valid";
        diag.append(ok);
        launchBtn.disabled = false;
        return true;
      }
      for (const item of result.diagnostics ?? []) {
        const row = document.createElement("div");
        row.className = "diag error";
        row.dataset.line = item.line === null ? "" : String(item.line);
        row.textContent = item.line === null ? item.message : `line ${item.line}: ${item.message}`;
        diag.append(row);
      }
    } catch (err) {
      const row = document.createElement("div");
      row.className = "diag error";
      row.textContent = String(err);
      diag.append(row);
    }
    launchBtn.disabled = true;
    return false;
  }

  validateBtn.addEventListener("click", () => void validate());
  area.addEventListener("input", () => {
    launchBtn.disabled = true; // must re-validate after edits
  });
  launchBtn.addEventListener("click", () => {
    const seed = seedInput.value.trim() === "" ? undefined : parseInt(seedInput.value, 10);
    const bots = botsInput.value.split(",").map((s) => s.trim()).filter(Boolean);
    onLaunch({ script: area.value, seed, bots });
  });
}
