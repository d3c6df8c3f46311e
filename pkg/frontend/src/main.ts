import { startApp } from './app';

const root = document.getElementById('app');
if (root) {
  startApp(root, { pollMs: 2000 }).catch((err) => {
    root.textContent = `failed to start: ${String(err)}`;
  });
}
