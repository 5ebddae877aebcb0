import { ApiClient } from "./api.js";
import { App } from "./app.js";
import { SequentialPlayer } from "./player.js";

function required(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) {
    throw new Error(`missing #${id}`);
  }
  return element;
}

const app = new App(new ApiClient(""), new SequentialPlayer(), {
  form: required("form"),
  transcript: required("transcript"),
  banner: required("banner"),
});

window.addEventListener("keydown", (event) => app.handleKeydown(event));
void app.start();
