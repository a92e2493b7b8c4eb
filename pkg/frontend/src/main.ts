// Bootstrap: connect to a project, then loop task -> submit -> next until
// the queue is exhausted.

import { AnnotationApi } from "./api.js";
import { mountTask } from "./workflows.js";
import type { TemplateSetDoc } from "./types.js";

function field(form: HTMLFormElement, name: string): string {
  const input = form.elements.namedItem(name) as HTMLInputElement | null;
  return input?.value.trim() ?? "";
}

async function runSession(host: HTMLElement, api: AnnotationApi): Promise<void> {
  const info = await api.projectInfo();
  let templateSet: TemplateSetDoc | null = null;
  if (info.workflow === "TemplateApplication") {
    templateSet = await api.templateSet();
  }

  const advance = async (): Promise<void> => {
    host.textContent = "";
    const task = await api.nextTask();
    if (!task) {
      const done = document.createElement("p");
      done.className = "done";
      done.textContent = "All assigned tasks are done. Thank you.";
      host.appendChild(done);
      return;
    }
    const view = mountTask(api, task, templateSet, info.locale, {
      onSubmitted: () => void advance(),
      onConflict: () => void advance(),
    });
    host.appendChild(view.root);
  };
  await advance();
}

export function boot(): void {
  const form = document.querySelector<HTMLFormElement>("#connect");
  const host = document.querySelector<HTMLElement>("#app");
  if (!form || !host) return;
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const api = new AnnotationApi(
      field(form, "server") || window.location.origin,
      field(form, "project"),
      field(form, "token"),
    );
    runSession(host, api).catch((error) => {
      host.textContent = `Could not start session: ${error}`;
    });
  });
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
