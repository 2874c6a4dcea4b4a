/** Entry point: hash-routed session bootstrap.
 *
 * A fresh visitor sees a start form; creating a session puts its id into
 * the URL hash (#/session/<id>) so that a reload resumes exactly where
 * the server says the respondent is. One browser tab drives one session.
 */

import { SurveyApi } from "./api.js";
import { SurveyApp } from "./app.js";

const SESSION_ROUTE = /^#\/session\/([A-Za-z0-9-]+)$/;

export function sessionIdFromHash(hash: string): string | null {
  const match = SESSION_ROUTE.exec(hash);
  return match ? match[1] ?? null : null;
}

export async function bootstrap(root: HTMLElement, api: SurveyApi): Promise<void> {
  const sessionId = sessionIdFromHash(window.location.hash);
  if (sessionId) {
    await new SurveyApp(root, api, sessionId).start();
    return;
  }

  root.replaceChildren();
  const form = document.createElement("div");
  form.className = "start-form";
  const label = document.createElement("input");
  label.placeholder = "Your name or alias (optional)";
  label.dataset.testid = "respondent-label";
  const start = document.createElement("button");
  start.className = "primary";
  start.textContent = "Start the survey";
  start.dataset.testid = "start";
  start.addEventListener("click", () => {
    void (async () => {
      start.disabled = true;
      try {
        const session = await api.createSession(label.value);
        window.location.hash = `#/session/${session.sessionId}`;
        await new SurveyApp(root, api, session.sessionId).start();
      } catch (err) {
        start.disabled = false;
        alert(`Could not start the survey: ${String(err)}`);
      }
    })();
  });
  form.append(label, start);
  root.append(form);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  const root = document.getElementById("app") as HTMLElement;
  // the UI is served by the survey service itself under /ui/, so the API
  // lives at the same origin, one level up
  void bootstrap(root, new SurveyApi(""));
}
